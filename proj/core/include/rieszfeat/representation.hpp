#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rieszfeat/image.hpp"
#include "rieszfeat/riesz.hpp"

namespace rieszfeat {

/// Global pooling statistic. Max pooling does not keep the representation
/// nonexpansive; mean pooling does.
enum class Pooling { Mean, Max };

const char* to_string(Pooling pooling) noexcept;
/// Parses "mean" or "max"; throws std::invalid_argument otherwise.
Pooling parse_pooling(const std::string& name);

/// Hierarchy parameters. Defaults: depth 3, 4 angles, C = 1, mean pooling,
/// no pre-smoothing.
struct RieszConfig {
  int depth = 3;
  int angles = 4;
  double scale_constant = 1.0;
  Pooling pooling = Pooling::Mean;
  std::optional<double> presmooth_sigma;

  /// Throws std::invalid_argument if angles is not a positive multiple of 4,
  /// depth < 0, scale_constant <= 0 or presmooth_sigma <= 0.
  void validate() const;
};

/// sum_{k=0..depth} angles^k.
std::size_t feature_count(int depth, int angles);

/// Sequence of rotation indices leading to a feature map; empty is the input
/// itself. Ordered depth-major, then lexicographically.
struct FeaturePath {
  std::vector<int> rotations;

  std::size_t depth() const noexcept { return rotations.size(); }
  /// "[]", "[0]", "[2,1,3]".
  std::string name() const;
  static FeaturePath parse(const std::string& name);

  friend bool operator==(const FeaturePath&, const FeaturePath&) = default;
  friend bool operator<(const FeaturePath& a, const FeaturePath& b) noexcept {
    if (a.rotations.size() != b.rotations.size()) return a.rotations.size() < b.rotations.size();
    return a.rotations < b.rotations;
  }
};

/// All paths up to the given depth in canonical order.
std::vector<FeaturePath> enumerate_paths(int depth, int angles);

/// Pooled representation, one value per FeaturePath in canonical order.
struct FeatureVector {
  std::vector<double> values;
  RieszConfig config;
};

/// Real and imaginary parts of f convolved with the rotated complex base filter:
/// real = H^(2)_phi f, imag = H_phi f, phi = angle_index * pi / angles.
struct QuadratureResponse {
  ImageGrid real_part;
  ImageGrid imag_part;
};

QuadratureResponse base_response(const ImageGrid& f, int angle_index, int angles,
                                 const MultiplierCache& cache = default_multiplier_cache());

/// One layer: C * |f * psi_r| for each of the config.angles rotations.
std::vector<ImageGrid> layer_S(const ImageGrid& f, const RieszConfig& config,
                               const MultiplierCache& cache = default_multiplier_cache());

/// Every feature map up to config.depth, keyed by path. Holds
/// feature_count(depth, angles) maps, so prefer extract_features when only
/// pooled values are needed.
std::map<FeaturePath, ImageGrid> build_hierarchy(
    const ImageGrid& f, const RieszConfig& config,
    const MultiplierCache& cache = default_multiplier_cache());

double pool_global(const ImageGrid& map, Pooling kind);

/// Periodic Gaussian smoothing with transfer function exp(-2 pi^2 sigma^2 |u|^2).
/// Throws std::invalid_argument unless sigma > 0.
ImageGrid gaussian_presmooth(const ImageGrid& f, double sigma);

/// Pooled hierarchy, computed level by level so that only one depth of maps
/// is alive at a time.
FeatureVector extract_features(const ImageGrid& f, const RieszConfig& config,
                               const MultiplierCache& cache = default_multiplier_cache());

}  // namespace rieszfeat
