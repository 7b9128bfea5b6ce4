#pragma once

#include <complex>
#include <compare>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "rieszfeat/image.hpp"

namespace rieszfeat {

/// Multi-index (n1, n2) of a Riesz transform R^(n1,n2) = R1^n1 R2^n2.
struct RieszOrder {
  int n1 = 0;
  int n2 = 0;

  int total() const noexcept { return n1 + n2; }
  friend auto operator<=>(const RieszOrder&, const RieszOrder&) = default;
};

/// All multi-indices with n1 + n2 == order, as (order,0), (order-1,1), ..., (0,order).
std::vector<RieszOrder> orders_of_degree(int order);

/// N! / (n1! n2!).
double multinomial_weight(RieszOrder order);

/// Frequency response of R^n sampled on the DFT grid.
///
/// Away from DC the value is the product of first-order factors
/// e_j(u) = -i u_j / |u|. DC is 0. On the Nyquist row (even H) the factor e_1
/// is replaced by the real value u_1/|u|, likewise e_2 on the Nyquist column
/// (even W): those frequencies alias onto their own negation, so a purely
/// imaginary factor would make real inputs produce complex outputs. The
/// replacement keeps |e_1|^2 + |e_2|^2 = 1 at every nonzero frequency.
struct RieszMultiplier {
  std::size_t height = 0;
  std::size_t width = 0;
  RieszOrder order;
  std::vector<std::complex<double>> values;

  std::complex<double> operator()(std::size_t p, std::size_t q) const noexcept {
    return values[p * width + q];
  }
};

struct MultiplierOptions {
  /// Debug switch for fault-injection runs: when false, every multiplier
  /// passes DC unchanged (value 1) instead of annihilating it.
  bool zero_dc = true;
};

RieszMultiplier riesz_multiplier(RieszOrder order, std::size_t height, std::size_t width,
                                 MultiplierOptions options = {});

/// First- and second-order steered multipliers for the angles k*pi/M, k < M.
struct SteeredBank {
  std::size_t height = 0;
  std::size_t width = 0;
  int angles = 0;
  std::vector<std::vector<std::complex<double>>> first;   // H_phi
  std::vector<std::vector<std::complex<double>>> second;  // H_phi^(2)
};

/// Thread-safe cache of multipliers keyed by (order, H, W) and steered banks
/// keyed by (H, W, M). Readers share a lock; insertion takes it exclusively.
class MultiplierCache {
 public:
  explicit MultiplierCache(MultiplierOptions options = {}) : options_(options) {}

  MultiplierCache(const MultiplierCache&) = delete;
  MultiplierCache& operator=(const MultiplierCache&) = delete;

  std::shared_ptr<const RieszMultiplier> get(RieszOrder order, std::size_t height,
                                             std::size_t width) const;
  std::shared_ptr<const SteeredBank> steered_bank(std::size_t height, std::size_t width,
                                                  int angles) const;

  const MultiplierOptions& options() const noexcept { return options_; }

 private:
  MultiplierOptions options_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::tuple<int, int, std::size_t, std::size_t>,
                   std::shared_ptr<const RieszMultiplier>>
      multipliers_;
  mutable std::map<std::tuple<std::size_t, std::size_t, int>, std::shared_ptr<const SteeredBank>>
      banks_;
};

/// Process-wide cache with default options.
const MultiplierCache& default_multiplier_cache();

/// First-order steered multiplier cos(phi) e_1 + sin(phi) e_2.
std::vector<std::complex<double>> steered_multiplier(double phi, std::size_t height,
                                                     std::size_t width,
                                                     const MultiplierCache& cache);

/// Second-order steered multiplier
/// cos^2 e_1^2 + sin^2 e_2^2 + 2 cos sin e_1 e_2.
std::vector<std::complex<double>> steered2_multiplier(double phi, std::size_t height,
                                                      std::size_t width,
                                                      const MultiplierCache& cache);

/// Pointwise product of a spectrum with a multiplier, then the real inverse DFT.
ImageGrid apply_multiplier(const Spectrum& spec, std::span<const std::complex<double>> mult);

ImageGrid riesz_transform(const ImageGrid& f, RieszOrder order,
                          const MultiplierCache& cache = default_multiplier_cache());

/// Directional Hilbert transform cos(phi) R1 f + sin(phi) R2 f, one fused multiplier.
ImageGrid hilbert_steered(const ImageGrid& f, double phi,
                          const MultiplierCache& cache = default_multiplier_cache());

/// Second-order directional transform
/// cos^2 R^(2,0) f + sin^2 R^(0,2) f + 2 cos sin R^(1,1) f.
ImageGrid hilbert2_steered(const ImageGrid& f, double phi,
                           const MultiplierCache& cache = default_multiplier_cache());

/// Synthesis sum over |n| = N of (N!/n!) (R^n)^* g_n, with the adjoint realized
/// by the conjugate multiplier. Given g_n = R^n f it returns f - mean(f).
/// Throws std::invalid_argument unless the components hold every n with
/// |n| = N exactly once, all with the same shape.
ImageGrid reconstruct_from_order(std::span<const std::pair<RieszOrder, ImageGrid>> components,
                                 const MultiplierCache& cache = default_multiplier_cache());

struct EnergyIdentity {
  double lhs = 0.0;  // sum over |n| = N of (N!/n!) ||R^n f||^2
  double rhs = 0.0;  // ||f - mean(f)||^2
};

/// Both sides of the order-N energy identity. Throws std::invalid_argument if N < 1.
EnergyIdentity energy_identity(const ImageGrid& f, int order,
                               const MultiplierCache& cache = default_multiplier_cache());

}  // namespace rieszfeat
