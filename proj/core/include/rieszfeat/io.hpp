#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rieszfeat/image.hpp"

namespace rieszfeat {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

class IdxError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, Truncated, CountMismatch };
  IdxError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class GrayImageError : public std::runtime_error {
 public:
  enum class Kind { Io, UnsupportedFormat, InconsistentDimensions, Truncated };
  GrayImageError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Reads an IDX image file (magic 0x803, big-endian u8 pixels) into grids with
/// values in [0, 1].
std::vector<ImageGrid> load_idx_images(const std::filesystem::path& path);

/// Reads an IDX label file (magic 0x801).
std::vector<int> load_idx_labels(const std::filesystem::path& path);

/// Reads an MNIST-style image/label pair. class_count is max(label) + 1.
LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);

/// Reads a portable graymap (P2 or P5, 8 or 16 bit) scaled to [0, 1] by maxval,
/// or a plain matrix text file: a "rows cols" header followed by rows*cols
/// whitespace-separated reals, taken as-is.
ImageGrid load_gray_image(const std::filesystem::path& path);

/// Writes a binary P5 graymap; samples are clamped to [0, 1] and quantized to 8 bits.
void write_pgm(const std::filesystem::path& path, const ImageGrid& img);

}  // namespace rieszfeat
