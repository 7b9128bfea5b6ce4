#include "rieszfeat/monogenic.hpp"

#include <cmath>
#include <numbers>

namespace rieszfeat {

MonogenicSignal monogenic(const ImageGrid& f, const MultiplierCache& cache) {
  return {f, riesz_transform(f, {1, 0}, cache), riesz_transform(f, {0, 1}, cache)};
}

ImageGrid local_amplitude(const MonogenicSignal& m) {
  ImageGrid out(m.f.height(), m.f.width());
  auto dst = out.samples();
  auto f = m.f.samples();
  auto f1 = m.f1.samples();
  auto f2 = m.f2.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = std::sqrt(f[i] * f[i] + f1[i] * f1[i] + f2[i] * f2[i]);
  }
  return out;
}

ImageGrid local_orientation(const MonogenicSignal& m) {
  ImageGrid out(m.f.height(), m.f.width());
  auto dst = out.samples();
  auto f1 = m.f1.samples();
  auto f2 = m.f2.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (f1[i] == 0.0) {
      dst[i] = f2[i] == 0.0 ? 0.0 : std::numbers::pi / 2;
    } else {
      dst[i] = std::atan(f2[i] / f1[i]);
    }
  }
  return out;
}

ImageGrid local_phase(const MonogenicSignal& m) {
  ImageGrid out(m.f.height(), m.f.width());
  auto dst = out.samples();
  auto f = m.f.samples();
  auto f1 = m.f1.samples();
  auto f2 = m.f2.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double odd = std::sqrt(f1[i] * f1[i] + f2[i] * f2[i]);
    if (f[i] == 0.0) {
      dst[i] = odd == 0.0 ? 0.0 : std::numbers::pi / 2;
    } else {
      dst[i] = std::atan(odd / f[i]);
    }
  }
  return out;
}

}  // namespace rieszfeat
