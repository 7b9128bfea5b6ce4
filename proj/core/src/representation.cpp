#include "rieszfeat/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rieszfeat/fft.hpp"

namespace rieszfeat {

namespace {

using cplx = std::complex<double>;

// f * psi_r = H^(2)_r f + i H_r f for every rotation of the bank, from one
// forward transform. Both steered multipliers are Hermitian, so the real and
// imaginary parts of the inverse transform are exactly the two real responses.
std::vector<std::vector<cplx>> quadrature_responses(const ImageGrid& f, int angles,
                                                    const MultiplierCache& cache) {
  const auto bank = cache.steered_bank(f.height(), f.width(), angles);
  const Spectrum spec = fft2(f);
  std::vector<std::vector<cplx>> out;
  out.reserve(static_cast<std::size_t>(angles));
  for (int r = 0; r < angles; ++r) {
    Spectrum s = spec;
    auto coeffs = s.coeffs();
    const auto& h1 = bank->first[static_cast<std::size_t>(r)];
    const auto& h2 = bank->second[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      coeffs[i] *= h2[i] + cplx{0.0, 1.0} * h1[i];
    }
    out.push_back(ifft2_complex(std::move(s)));
  }
  return out;
}

ImageGrid scaled_amplitude(const std::vector<cplx>& z, std::size_t height, std::size_t width,
                           double scale) {
  std::vector<double> amp(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    // sqrt of the sum of squares rather than std::abs: exact under power-of-two
    // rescaling, which the C-homogeneity of the features relies on
    amp[i] = scale * std::sqrt(z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
  }
  return ImageGrid(height, width, std::move(amp));
}

}  // namespace

const char* to_string(Pooling pooling) noexcept {
  return pooling == Pooling::Mean ? "mean" : "max";
}

Pooling parse_pooling(const std::string& name) {
  if (name == "mean") return Pooling::Mean;
  if (name == "max") return Pooling::Max;
  throw std::invalid_argument("unknown pooling '" + name + "' (expected mean or max)");
}

void RieszConfig::validate() const {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (angles <= 0 || angles % 4 != 0) {
    throw std::invalid_argument("angles must be a positive multiple of 4, got " +
                                std::to_string(angles));
  }
  if (!(scale_constant > 0.0) || !std::isfinite(scale_constant)) {
    throw std::invalid_argument("scale_constant must be positive");
  }
  if (presmooth_sigma && !(*presmooth_sigma > 0.0)) {
    throw std::invalid_argument("presmooth_sigma must be positive when set");
  }
}

std::size_t feature_count(int depth, int angles) {
  std::size_t total = 0;
  std::size_t level = 1;
  for (int k = 0; k <= depth; ++k) {
    total += level;
    level *= static_cast<std::size_t>(angles);
  }
  return total;
}

std::string FeaturePath::name() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(rotations[i]);
  }
  s += ']';
  return s;
}

FeaturePath FeaturePath::parse(const std::string& name) {
  if (name.size() < 2 || name.front() != '[' || name.back() != ']') {
    throw std::invalid_argument("malformed feature path '" + name + "'");
  }
  FeaturePath path;
  const std::string body = name.substr(1, name.size() - 2);
  if (body.empty()) return path;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 0) {
      throw std::invalid_argument("malformed feature path '" + name + "'");
    }
    path.rotations.push_back(v);
  }
  return path;
}

std::vector<FeaturePath> enumerate_paths(int depth, int angles) {
  std::vector<FeaturePath> out{FeaturePath{}};
  std::size_t level_begin = 0;
  for (int k = 1; k <= depth; ++k) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int r = 0; r < angles; ++r) {
        FeaturePath child = out[i];
        child.rotations.push_back(r);
        out.push_back(std::move(child));
      }
    }
    level_begin = level_end;
  }
  return out;
}

QuadratureResponse base_response(const ImageGrid& f, int angle_index, int angles,
                                 const MultiplierCache& cache) {
  if (angles <= 0 || angle_index < 0 || angle_index >= angles) {
    throw std::invalid_argument("angle index out of range");
  }
  const double phi = angle_index * std::numbers::pi / angles;
  const Spectrum spec = fft2(f);
  const auto h1 = steered_multiplier(phi, f.height(), f.width(), cache);
  const auto h2 = steered2_multiplier(phi, f.height(), f.width(), cache);
  Spectrum s = spec;
  auto coeffs = s.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= h2[i] + cplx{0.0, 1.0} * h1[i];
  const auto z = ifft2_complex(std::move(s));
  std::vector<double> re(z.size());
  std::vector<double> im(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
  }
  return {ImageGrid(f.height(), f.width(), std::move(re)),
          ImageGrid(f.height(), f.width(), std::move(im))};
}

std::vector<ImageGrid> layer_S(const ImageGrid& f, const RieszConfig& config,
                               const MultiplierCache& cache) {
  config.validate();
  std::vector<ImageGrid> out;
  out.reserve(static_cast<std::size_t>(config.angles));
  for (const auto& z : quadrature_responses(f, config.angles, cache)) {
    out.push_back(scaled_amplitude(z, f.height(), f.width(), config.scale_constant));
  }
  return out;
}

std::map<FeaturePath, ImageGrid> build_hierarchy(const ImageGrid& f, const RieszConfig& config,
                                                 const MultiplierCache& cache) {
  config.validate();
  const ImageGrid input =
      config.presmooth_sigma ? gaussian_presmooth(f, *config.presmooth_sigma) : f;
  std::map<FeaturePath, ImageGrid> maps;
  maps.emplace(FeaturePath{}, input);
  std::vector<FeaturePath> level{FeaturePath{}};
  for (int k = 1; k <= config.depth; ++k) {
    std::vector<FeaturePath> next;
    for (const auto& parent : level) {
      auto children = layer_S(maps.at(parent), config, cache);
      for (int r = 0; r < config.angles; ++r) {
        FeaturePath child = parent;
        child.rotations.push_back(r);
        maps.emplace(child, std::move(children[static_cast<std::size_t>(r)]));
        next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  return maps;
}

double pool_global(const ImageGrid& map, Pooling kind) {
  if (kind == Pooling::Mean) return mean(map);
  return *std::max_element(map.samples().begin(), map.samples().end());
}

ImageGrid gaussian_presmooth(const ImageGrid& f, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_presmooth: sigma must be positive");
  const auto fc = FreqCoords::make(f.height(), f.width());
  const double k = -2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma;
  std::vector<cplx> mult(f.size());
  for (std::size_t p = 0; p < f.height(); ++p) {
    for (std::size_t q = 0; q < f.width(); ++q) {
      const double r2 = fc.u1[p] * fc.u1[p] + fc.u2[q] * fc.u2[q];
      mult[p * f.width() + q] = std::exp(k * r2);
    }
  }
  return apply_multiplier(fft2(f), mult);
}

FeatureVector extract_features(const ImageGrid& f, const RieszConfig& config,
                               const MultiplierCache& cache) {
  config.validate();
  FeatureVector fv;
  fv.config = config;
  fv.values.reserve(feature_count(config.depth, config.angles));

  std::vector<ImageGrid> level;
  level.push_back(config.presmooth_sigma ? gaussian_presmooth(f, *config.presmooth_sigma) : f);
  fv.values.push_back(pool_global(level.front(), config.pooling));

  for (int k = 1; k <= config.depth; ++k) {
    const bool last = k == config.depth;
    std::vector<ImageGrid> next;
    if (!last) next.reserve(level.size() * static_cast<std::size_t>(config.angles));
    for (const auto& parent : level) {
      for (const auto& z : quadrature_responses(parent, config.angles, cache)) {
        ImageGrid child =
            scaled_amplitude(z, parent.height(), parent.width(), config.scale_constant);
        fv.values.push_back(pool_global(child, config.pooling));
        if (!last) next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  return fv;
}

}  // namespace rieszfeat
