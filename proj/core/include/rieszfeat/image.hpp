#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rieszfeat {

/// Real-valued image or feature map, row-major.
///
/// Rows index the first spatial coordinate (x1), columns the second (x2).
/// Every sample is finite; the constructors reject NaN/Inf. Element access
/// through the non-const accessors is unchecked, callers keep samples finite.
class ImageGrid {
 public:
  /// Zero-filled grid.
  ImageGrid(std::size_t height, std::size_t width);
  ImageGrid(std::size_t height, std::size_t width, std::vector<double> samples);

  static ImageGrid filled(std::size_t height, std::size_t width, double value);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return samples_.size(); }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return samples_[row * width_ + col];
  }
  double& operator()(std::size_t row, std::size_t col) noexcept {
    return samples_[row * width_ + col];
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }

  bool same_shape(const ImageGrid& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> samples_;
};

/// Complex 2D DFT coefficients in standard DFT index order (DC at (0,0)).
class Spectrum {
 public:
  Spectrum(std::size_t height, std::size_t width);
  Spectrum(std::size_t height, std::size_t width,
           std::vector<std::complex<double>> coeffs);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::complex<double> operator()(std::size_t p, std::size_t q) const noexcept {
    return coeffs_[p * width_ + q];
  }
  std::complex<double>& operator()(std::size_t p, std::size_t q) noexcept {
    return coeffs_[p * width_ + q];
  }

  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::complex<double>> coeffs_;
};

/// Maps a DFT index to its signed frequency index in [-ceil(n/2)+1, floor(n/2)].
long signed_frequency(std::size_t index, std::size_t n) noexcept;

/// True when the index is the Nyquist index of an even-length axis. Those
/// indices pair with themselves under negation.
bool is_nyquist(std::size_t index, std::size_t n) noexcept;

/// Frequency coordinates in cycles/pixel for every index of an H x W grid.
/// Separable: u1 depends only on the row index, u2 only on the column index.
struct FreqCoords {
  std::vector<double> u1;  // length H
  std::vector<double> u2;  // length W

  static FreqCoords make(std::size_t height, std::size_t width);
};

/// Images with class labels in [0, class_count).
struct LabeledDataset {
  std::vector<ImageGrid> images;
  std::vector<int> labels;
  int class_count = 0;

  /// Throws std::invalid_argument if sizes disagree or a label is out of range.
  void validate() const;
};

double sum(const ImageGrid& img) noexcept;
double mean(const ImageGrid& img) noexcept;
double sum_of_squares(const ImageGrid& img) noexcept;
double l2_norm(const ImageGrid& img) noexcept;
double max_abs(const ImageGrid& img) noexcept;

/// Pointwise a - b. Throws std::invalid_argument on shape mismatch.
ImageGrid subtract(const ImageGrid& a, const ImageGrid& b);

/// ||a - b||_2 / ||b||_2, or ||a - b||_2 when b is zero.
double relative_l2_error(const ImageGrid& a, const ImageGrid& b);

/// f - mean(f).
ImageGrid remove_mean(const ImageGrid& img);

/// Circular shift: out(r, c) = img(r - dr mod H, c - dc mod W).
ImageGrid circular_shift(const ImageGrid& img, long dr, long dc);

/// Affine map of gray values onto [0, 1]. A constant image maps to zeros.
ImageGrid minmax_normalize(const ImageGrid& img);

}  // namespace rieszfeat
