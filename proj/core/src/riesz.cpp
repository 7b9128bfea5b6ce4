#include "rieszfeat/riesz.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "rieszfeat/fft.hpp"

namespace rieszfeat {

namespace {

using cplx = std::complex<double>;

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

cplx ipow(cplx base, int exponent) {
  cplx r{1.0, 0.0};
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

}  // namespace

std::vector<RieszOrder> orders_of_degree(int order) {
  if (order < 0) throw std::invalid_argument("negative Riesz order");
  std::vector<RieszOrder> out;
  out.reserve(static_cast<std::size_t>(order) + 1);
  for (int n1 = order; n1 >= 0; --n1) out.push_back({n1, order - n1});
  return out;
}

double multinomial_weight(RieszOrder order) {
  return factorial(order.total()) / (factorial(order.n1) * factorial(order.n2));
}

RieszMultiplier riesz_multiplier(RieszOrder order, std::size_t height, std::size_t width,
                                 MultiplierOptions options) {
  if (order.n1 < 0 || order.n2 < 0) throw std::invalid_argument("negative Riesz order");
  const auto fc = FreqCoords::make(height, width);
  RieszMultiplier m;
  m.height = height;
  m.width = width;
  m.order = order;
  m.values.resize(height * width);
  for (std::size_t p = 0; p < height; ++p) {
    const double u1 = fc.u1[p];
    const bool nyq1 = is_nyquist(p, height);
    for (std::size_t q = 0; q < width; ++q) {
      const double u2 = fc.u2[q];
      if (p == 0 && q == 0) {
        m.values[0] = options.zero_dc ? cplx{0.0, 0.0} : cplx{1.0, 0.0};
        continue;
      }
      const double r = std::hypot(u1, u2);
      const cplx e1 = nyq1 ? cplx{u1 / r, 0.0} : cplx{0.0, -u1 / r};
      const cplx e2 = is_nyquist(q, width) ? cplx{u2 / r, 0.0} : cplx{0.0, -u2 / r};
      m.values[p * width + q] = ipow(e1, order.n1) * ipow(e2, order.n2);
    }
  }
  return m;
}

std::shared_ptr<const RieszMultiplier> MultiplierCache::get(RieszOrder order,
                                                            std::size_t height,
                                                            std::size_t width) const {
  const auto key = std::make_tuple(order.n1, order.n2, height, width);
  {
    std::shared_lock lock(mutex_);
    if (auto it = multipliers_.find(key); it != multipliers_.end()) return it->second;
  }
  auto built = std::make_shared<const RieszMultiplier>(
      riesz_multiplier(order, height, width, options_));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = multipliers_.emplace(key, std::move(built));
  return it->second;
}

std::shared_ptr<const SteeredBank> MultiplierCache::steered_bank(std::size_t height,
                                                                 std::size_t width,
                                                                 int angles) const {
  if (angles <= 0) throw std::invalid_argument("steered bank needs a positive angle count");
  const auto key = std::make_tuple(height, width, angles);
  {
    std::shared_lock lock(mutex_);
    if (auto it = banks_.find(key); it != banks_.end()) return it->second;
  }
  auto bank = std::make_shared<SteeredBank>();
  bank->height = height;
  bank->width = width;
  bank->angles = angles;
  for (int k = 0; k < angles; ++k) {
    const double phi = k * std::numbers::pi / angles;
    bank->first.push_back(steered_multiplier(phi, height, width, *this));
    bank->second.push_back(steered2_multiplier(phi, height, width, *this));
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] = banks_.emplace(key, std::move(bank));
  return it->second;
}

const MultiplierCache& default_multiplier_cache() {
  static const MultiplierCache cache;
  return cache;
}

std::vector<std::complex<double>> steered_multiplier(double phi, std::size_t height,
                                                     std::size_t width,
                                                     const MultiplierCache& cache) {
  const auto m1 = cache.get({1, 0}, height, width);
  const auto m2 = cache.get({0, 1}, height, width);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  std::vector<cplx> out(height * width);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * m1->values[i] + s * m2->values[i];
  return out;
}

std::vector<std::complex<double>> steered2_multiplier(double phi, std::size_t height,
                                                      std::size_t width,
                                                      const MultiplierCache& cache) {
  const auto m20 = cache.get({2, 0}, height, width);
  const auto m02 = cache.get({0, 2}, height, width);
  const auto m11 = cache.get({1, 1}, height, width);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  std::vector<cplx> out(height * width);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = c * c * m20->values[i] + s * s * m02->values[i] + 2.0 * c * s * m11->values[i];
  }
  return out;
}

ImageGrid apply_multiplier(const Spectrum& spec, std::span<const std::complex<double>> mult) {
  if (mult.size() != spec.size()) {
    throw std::invalid_argument("multiplier size does not match spectrum");
  }
  Spectrum out = spec;
  auto coeffs = out.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= mult[i];
  return ifft2(out);
}

ImageGrid riesz_transform(const ImageGrid& f, RieszOrder order, const MultiplierCache& cache) {
  if (order.total() == 0) return f;
  const auto m = cache.get(order, f.height(), f.width());
  return apply_multiplier(fft2(f), m->values);
}

ImageGrid hilbert_steered(const ImageGrid& f, double phi, const MultiplierCache& cache) {
  return apply_multiplier(fft2(f), steered_multiplier(phi, f.height(), f.width(), cache));
}

ImageGrid hilbert2_steered(const ImageGrid& f, double phi, const MultiplierCache& cache) {
  return apply_multiplier(fft2(f), steered2_multiplier(phi, f.height(), f.width(), cache));
}

ImageGrid reconstruct_from_order(std::span<const std::pair<RieszOrder, ImageGrid>> components,
                                 const MultiplierCache& cache) {
  if (components.empty()) throw std::invalid_argument("no Riesz components to reconstruct from");
  const int order = components.front().first.total();
  if (order < 1) throw std::invalid_argument("reconstruction needs order >= 1");
  const auto& shape = components.front().second;
  std::set<RieszOrder> seen;
  for (const auto& [n, g] : components) {
    if (n.n1 < 0 || n.n2 < 0 || n.total() != order) {
      throw std::invalid_argument("mixed Riesz orders in reconstruction");
    }
    if (!g.same_shape(shape)) throw std::invalid_argument("component shapes differ");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate Riesz multi-index");
  }
  if (seen.size() != static_cast<std::size_t>(order) + 1) {
    throw std::invalid_argument("incomplete multi-index set: have " + std::to_string(seen.size()) +
                                " of " + std::to_string(order + 1) + " for order " +
                                std::to_string(order));
  }
  Spectrum acc(shape.height(), shape.width());
  auto dst = acc.coeffs();
  for (const auto& [n, g] : components) {
    const auto m = cache.get(n, g.height(), g.width());
    const double w = multinomial_weight(n);
    const Spectrum gs = fft2(g);
    auto src = gs.coeffs();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w * std::conj(m->values[i]) * src[i];
  }
  return ifft2(acc);
}

EnergyIdentity energy_identity(const ImageGrid& f, int order, const MultiplierCache& cache) {
  if (order < 1) throw std::invalid_argument("energy identity needs order >= 1");
  const Spectrum spec = fft2(f);
  EnergyIdentity e;
  for (const auto& n : orders_of_degree(order)) {
    const auto m = cache.get(n, f.height(), f.width());
    e.lhs += multinomial_weight(n) * sum_of_squares(apply_multiplier(spec, m->values));
  }
  e.rhs = sum_of_squares(remove_mean(f));
  return e;
}

}  // namespace rieszfeat
