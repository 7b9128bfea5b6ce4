#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "rieszfeat/image.hpp"

namespace rieszfeat {

/// Axis-aligned box in padded-image coordinates; rows [row0, row0 + height).
struct BoundingBox {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct BboxParams {
  std::size_t pad = 50;
  double threshold = 0.5;
  double enlarge = 0.4;
};

/// No pixel of the normalized image reaches the foreground threshold.
class BlankImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero padding on every side.
ImageGrid pad_zeros(const ImageGrid& img, std::size_t pad);

/// Tight box around the pixels >= threshold, or nullopt when there are none.
std::optional<BoundingBox> foreground_box(const ImageGrid& img, double threshold);

/// Scales width and height by (1 + enlarge) about the box center, rounding
/// outward and clamping to a height x width frame.
BoundingBox enlarge_box(const BoundingBox& box, double enlarge, std::size_t height,
                        std::size_t width);

ImageGrid crop(const ImageGrid& img, const BoundingBox& box);

struct BboxResult {
  ImageGrid crop;
  BoundingBox tight;     // before enlargement
  BoundingBox enlarged;  // the cropped region
};

/// Min-max normalize, pad, threshold, tight box, enlarge, crop.
/// Throws BlankImageError when the foreground is empty.
BboxResult bbox_extract_detailed(const ImageGrid& f, const BboxParams& params = {});

ImageGrid bbox_extract(const ImageGrid& f, const BboxParams& params = {});

enum class Interpolation { Nearest, Bilinear };

Interpolation parse_interpolation(const std::string& name);

/// Resamples to round(H * factor) x round(W * factor) with pixel-center
/// alignment. Bilinear clamps at the edges. Throws std::invalid_argument if
/// factor <= 0 or an output dimension rounds to 0.
ImageGrid rescale(const ImageGrid& f, double factor, Interpolation method);

}  // namespace rieszfeat
