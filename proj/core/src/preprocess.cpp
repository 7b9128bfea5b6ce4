#include "rieszfeat/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace rieszfeat {

namespace {

// Slack for the outward rounding of enlarged boxes: 1.4 * h / 2 is not exact
// in binary and must not pick up a spurious pixel.
constexpr double kRoundingSlack = 1e-9;

std::size_t clamp_index(double v, std::size_t hi) {
  if (v <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(v), hi);
}

}  // namespace

ImageGrid pad_zeros(const ImageGrid& img, std::size_t pad) {
  ImageGrid out(img.height() + 2 * pad, img.width() + 2 * pad);
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) out(r + pad, c + pad) = img(r, c);
  }
  return out;
}

std::optional<BoundingBox> foreground_box(const ImageGrid& img, double threshold) {
  std::size_t r0 = img.height();
  std::size_t r1 = 0;
  std::size_t c0 = img.width();
  std::size_t c1 = 0;
  bool any = false;
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      if (img(r, c) >= threshold) {
        any = true;
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
    }
  }
  if (!any) return std::nullopt;
  return BoundingBox{r0, c0, r1 - r0 + 1, c1 - c0 + 1};
}

BoundingBox enlarge_box(const BoundingBox& box, double enlarge, std::size_t height,
                        std::size_t width) {
  const double f = 1.0 + enlarge;
  const double cr = static_cast<double>(box.row0) + 0.5 * static_cast<double>(box.height);
  const double cc = static_cast<double>(box.col0) + 0.5 * static_cast<double>(box.width);
  const double hr = 0.5 * f * static_cast<double>(box.height);
  const double hc = 0.5 * f * static_cast<double>(box.width);
  const std::size_t r0 = clamp_index(std::floor(cr - hr + kRoundingSlack), height);
  const std::size_t r1 = clamp_index(std::ceil(cr + hr - kRoundingSlack), height);
  const std::size_t c0 = clamp_index(std::floor(cc - hc + kRoundingSlack), width);
  const std::size_t c1 = clamp_index(std::ceil(cc + hc - kRoundingSlack), width);
  BoundingBox out{r0, c0, r1 - r0, c1 - c0};
  // never lose the tight box, even for enlarge < 0
  const std::size_t top = std::min(out.row0, box.row0);
  const std::size_t left = std::min(out.col0, box.col0);
  const std::size_t bottom = std::max(out.row0 + out.height, box.row0 + box.height);
  const std::size_t right = std::max(out.col0 + out.width, box.col0 + box.width);
  return {top, left, bottom - top, right - left};
}

ImageGrid crop(const ImageGrid& img, const BoundingBox& box) {
  if (box.height == 0 || box.width == 0 || box.row0 + box.height > img.height() ||
      box.col0 + box.width > img.width()) {
    throw std::invalid_argument("crop box outside the image");
  }
  ImageGrid out(box.height, box.width);
  for (std::size_t r = 0; r < box.height; ++r) {
    for (std::size_t c = 0; c < box.width; ++c) out(r, c) = img(box.row0 + r, box.col0 + c);
  }
  return out;
}

BboxResult bbox_extract_detailed(const ImageGrid& f, const BboxParams& params) {
  const ImageGrid padded = pad_zeros(minmax_normalize(f), params.pad);
  const auto tight = foreground_box(padded, params.threshold);
  if (!tight) {
    throw BlankImageError("no pixel reaches the foreground threshold " +
                          std::to_string(params.threshold) + " (blank image?)");
  }
  const BoundingBox enlarged =
      enlarge_box(*tight, params.enlarge, padded.height(), padded.width());
  return {crop(padded, enlarged), *tight, enlarged};
}

ImageGrid bbox_extract(const ImageGrid& f, const BboxParams& params) {
  return bbox_extract_detailed(f, params).crop;
}

Interpolation parse_interpolation(const std::string& name) {
  if (name == "nearest") return Interpolation::Nearest;
  if (name == "bilinear") return Interpolation::Bilinear;
  throw std::invalid_argument("unknown interpolation '" + name + "'");
}

ImageGrid rescale(const ImageGrid& f, double factor, Interpolation method) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("rescale factor must be positive");
  }
  const auto out_h = static_cast<std::size_t>(std::llround(static_cast<double>(f.height()) * factor));
  const auto out_w = static_cast<std::size_t>(std::llround(static_cast<double>(f.width()) * factor));
  if (out_h == 0 || out_w == 0) {
    throw std::invalid_argument("rescale factor produces an empty image");
  }
  const double sr = static_cast<double>(out_h) / static_cast<double>(f.height());
  const double sc = static_cast<double>(out_w) / static_cast<double>(f.width());
  ImageGrid out(out_h, out_w);

  if (method == Interpolation::Nearest) {
    for (std::size_t r = 0; r < out_h; ++r) {
      const auto src_r = std::min(
          static_cast<std::size_t>(std::floor((static_cast<double>(r) + 0.5) / sr)),
          f.height() - 1);
      for (std::size_t c = 0; c < out_w; ++c) {
        const auto src_c = std::min(
            static_cast<std::size_t>(std::floor((static_cast<double>(c) + 0.5) / sc)),
            f.width() - 1);
        out(r, c) = f(src_r, src_c);
      }
    }
    return out;
  }

  auto sample_axis = [](std::size_t i, double scale, std::size_t n) {
    const double x = std::clamp((static_cast<double>(i) + 0.5) / scale - 0.5, 0.0,
                                static_cast<double>(n - 1));
    const auto x0 = static_cast<std::size_t>(std::floor(x));
    const std::size_t x1 = std::min(x0 + 1, n - 1);
    return std::make_tuple(x0, x1, x - static_cast<double>(x0));
  };
  for (std::size_t r = 0; r < out_h; ++r) {
    const auto [r0, r1, tr] = sample_axis(r, sr, f.height());
    for (std::size_t c = 0; c < out_w; ++c) {
      const auto [c0, c1, tc] = sample_axis(c, sc, f.width());
      const double top = (1.0 - tc) * f(r0, c0) + tc * f(r0, c1);
      const double bottom = (1.0 - tc) * f(r1, c0) + tc * f(r1, c1);
      out(r, c) = (1.0 - tr) * top + tr * bottom;
    }
  }
  return out;
}

}  // namespace rieszfeat
