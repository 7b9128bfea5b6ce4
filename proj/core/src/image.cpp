#include "rieszfeat/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rieszfeat {

namespace {

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(height) + "x" + std::to_string(width));
  }
}

}  // namespace

ImageGrid::ImageGrid(std::size_t height, std::size_t width)
    : height_(height), width_(width) {
  check_dims(height, width);
  samples_.assign(height * width, 0.0);
}

ImageGrid::ImageGrid(std::size_t height, std::size_t width, std::vector<double> samples)
    : height_(height), width_(width), samples_(std::move(samples)) {
  check_dims(height, width);
  if (samples_.size() != height * width) {
    throw std::invalid_argument("sample count " + std::to_string(samples_.size()) +
                                " does not match " + std::to_string(height) + "x" +
                                std::to_string(width));
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw std::invalid_argument("image sample is not finite");
  }
}

ImageGrid ImageGrid::filled(std::size_t height, std::size_t width, double value) {
  return ImageGrid(height, width, std::vector<double>(height * width, value));
}

Spectrum::Spectrum(std::size_t height, std::size_t width) : height_(height), width_(width) {
  check_dims(height, width);
  coeffs_.assign(height * width, {0.0, 0.0});
}

Spectrum::Spectrum(std::size_t height, std::size_t width,
                   std::vector<std::complex<double>> coeffs)
    : height_(height), width_(width), coeffs_(std::move(coeffs)) {
  check_dims(height, width);
  if (coeffs_.size() != height * width) {
    throw std::invalid_argument("coefficient count does not match spectrum dimensions");
  }
}

long signed_frequency(std::size_t index, std::size_t n) noexcept {
  const auto i = static_cast<long>(index);
  const auto len = static_cast<long>(n);
  return i <= len / 2 ? i : i - len;
}

bool is_nyquist(std::size_t index, std::size_t n) noexcept {
  return n % 2 == 0 && index == n / 2;
}

FreqCoords FreqCoords::make(std::size_t height, std::size_t width) {
  FreqCoords fc;
  fc.u1.resize(height);
  fc.u2.resize(width);
  for (std::size_t p = 0; p < height; ++p) {
    fc.u1[p] = static_cast<double>(signed_frequency(p, height)) / static_cast<double>(height);
  }
  for (std::size_t q = 0; q < width; ++q) {
    fc.u2[q] = static_cast<double>(signed_frequency(q, width)) / static_cast<double>(width);
  }
  return fc;
}

void LabeledDataset::validate() const {
  if (images.size() != labels.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(images.size()) +
                                " images but " + std::to_string(labels.size()) + " labels");
  }
  if (class_count <= 0 && !labels.empty()) {
    throw std::invalid_argument("dataset class_count must be positive");
  }
  for (int label : labels) {
    if (label < 0 || label >= class_count) {
      throw std::invalid_argument("label " + std::to_string(label) + " outside [0, " +
                                  std::to_string(class_count) + ")");
    }
  }
}

double sum(const ImageGrid& img) noexcept {
  double s = 0.0;
  for (double v : img.samples()) s += v;
  return s;
}

double mean(const ImageGrid& img) noexcept {
  return sum(img) / static_cast<double>(img.size());
}

double sum_of_squares(const ImageGrid& img) noexcept {
  double s = 0.0;
  for (double v : img.samples()) s += v * v;
  return s;
}

double l2_norm(const ImageGrid& img) noexcept { return std::sqrt(sum_of_squares(img)); }

double max_abs(const ImageGrid& img) noexcept {
  double m = 0.0;
  for (double v : img.samples()) m = std::max(m, std::abs(v));
  return m;
}

ImageGrid subtract(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("subtract: shape mismatch");
  ImageGrid out(a.height(), a.width());
  auto dst = out.samples();
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = sa[i] - sb[i];
  return out;
}

double relative_l2_error(const ImageGrid& a, const ImageGrid& b) {
  const double diff = l2_norm(subtract(a, b));
  const double ref = l2_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

ImageGrid remove_mean(const ImageGrid& img) {
  ImageGrid out = img;
  const double m = mean(img);
  for (double& v : out.samples()) v -= m;
  return out;
}

ImageGrid circular_shift(const ImageGrid& img, long dr, long dc) {
  const auto h = static_cast<long>(img.height());
  const auto w = static_cast<long>(img.width());
  ImageGrid out(img.height(), img.width());
  for (long r = 0; r < h; ++r) {
    const long sr = ((r - dr) % h + h) % h;
    for (long c = 0; c < w; ++c) {
      const long sc = ((c - dc) % w + w) % w;
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          img(static_cast<std::size_t>(sr), static_cast<std::size_t>(sc));
    }
  }
  return out;
}

ImageGrid minmax_normalize(const ImageGrid& img) {
  const auto [lo_it, hi_it] = std::minmax_element(img.samples().begin(), img.samples().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  ImageGrid out(img.height(), img.width());
  if (hi == lo) return out;
  const double scale = 1.0 / (hi - lo);
  auto dst = out.samples();
  auto src = img.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    // clamp guards the last ulp so the result stays inside [0, 1]
    dst[i] = std::clamp((src[i] - lo) * scale, 0.0, 1.0);
  }
  return out;
}

}  // namespace rieszfeat
