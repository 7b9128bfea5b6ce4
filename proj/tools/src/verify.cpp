#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "commands.hpp"
#include "rieszfeat/fft.hpp"
#include "rieszfeat/representation.hpp"
#include "rieszfeat/riesz.hpp"

namespace rieszfeat::cli {

namespace {

ImageGrid uniform_image(std::size_t h, std::size_t w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> s(h * w);
  for (auto& v : s) v = u(rng);
  return ImageGrid(h, w, std::move(s));
}

// Random spectrum supported on 0 < |u| < cutoff, Hermitian by construction.
ImageGrid lowpass_image(std::size_t n, double cutoff, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Spectrum spec(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const double u1 = static_cast<double>(signed_frequency(p, n)) / static_cast<double>(n);
      const double u2 = static_cast<double>(signed_frequency(q, n)) / static_cast<double>(n);
      const double r = std::hypot(u1, u2);
      if (r == 0.0 || r >= cutoff) continue;
      const std::size_t mp = (n - p) % n;
      const std::size_t mq = (n - q) % n;
      if (mp * n + mq < p * n + q) continue;  // filled from its partner
      const std::complex<double> z(g(rng), g(rng));
      spec(p, q) = z;
      spec(mp, mq) = std::conj(z);
    }
  }
  return ifft2(spec);
}

ImageGrid block_average2(const ImageGrid& f) {
  ImageGrid out(f.height() / 2, f.width() / 2);
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) {
      out(r, c) = 0.25 * (f(2 * r, 2 * c) + f(2 * r + 1, 2 * c) + f(2 * r, 2 * c + 1) +
                          f(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

double rel_linf(const std::vector<double>& ref, const std::vector<double>& x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num = std::max(num, std::abs(ref[i] - x[i]));
    den = std::max(den, std::abs(ref[i]));
  }
  return den > 0.0 ? num / den : num;
}

RieszConfig riesz_config(int depth, int angles, double c) {
  RieszConfig cfg;
  cfg.depth = depth;
  cfg.angles = angles;
  cfg.scale_constant = c;
  return cfg;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const RunConfig& config) {
  MultiplierOptions options;
  options.zero_dc = !config.inject_fault;
  const MultiplierCache cache(options);
  std::mt19937_64 rng(config.seed);
  std::vector<PropertyResult> results;
  auto record = [&results](std::string name, double tol, double measured) {
    results.push_back({std::move(name), tol, measured, measured <= tol});
  };

  std::vector<ImageGrid> images;
  for (int i = 0; i < 6; ++i) images.push_back(uniform_image(32, 32, rng));

  {
    const double a = std::abs(static_cast<double>(feature_count(3, 4)) - 85.0);
    const double b = std::abs(static_cast<double>(feature_count(2, 8)) - 73.0);
    record("feature_count", 0.0, a + b);
  }

  for (int order = 1; order <= 2; ++order) {
    double worst_energy = 0.0;
    double worst_recon = 0.0;
    for (const auto& f : images) {
      const auto e = energy_identity(f, order, cache);
      worst_energy = std::max(worst_energy, std::abs(e.lhs - e.rhs) / e.rhs);
      std::vector<std::pair<RieszOrder, ImageGrid>> parts;
      for (const auto n : orders_of_degree(order)) parts.emplace_back(n, riesz_transform(f, n, cache));
      worst_recon = std::max(worst_recon, relative_l2_error(reconstruct_from_order(parts, cache),
                                                            remove_mean(f)));
    }
    record("energy_identity_order" + std::to_string(order), 1e-8, worst_energy);
    record("reconstruction_order" + std::to_string(order), 1e-8, worst_recon);
  }

  {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    double worst_pair = 0.0;
    double worst_second = 0.0;
    for (const auto& f : images) {
      const double ff = sum_of_squares(f);
      for (int k = 0; k < 8; ++k) {
        const double r = angle(rng);
        const double pair = sum_of_squares(hilbert_steered(f, r, cache)) +
                            sum_of_squares(hilbert_steered(f, r + std::numbers::pi / 2, cache));
        worst_pair = std::max(worst_pair, pair / ff - 1.0);
        worst_second = std::max(worst_second, sum_of_squares(hilbert2_steered(f, r, cache)) / ff - 1.0);
      }
    }
    record("steered_pair_bound", 1e-10, std::max(worst_pair, 0.0));
    record("steered_second_order_bound", 1e-10, std::max(worst_second, 0.0));
  }

  {
    double worst = 0.0;
    for (std::size_t n : {33u, 64u}) {
      ImageGrid delta(n, n);
      delta(0, 0) = 1.0;
      for (int k = 0; k < 4; ++k) {
        const auto q = base_response(delta, k, 4, cache);
        worst = std::max({worst, std::abs(sum(q.real_part)), std::abs(sum(q.imag_part))});
      }
    }
    record("kernel_zero_integral", 1e-8, worst);
  }

  {
    const auto m1 = cache.get({1, 0}, 64, 64);
    const auto m2 = cache.get({0, 1}, 64, 64);
    double worst = 0.0;
    for (std::size_t i = 1; i < m1->values.size(); ++i) {
      worst = std::max(worst, std::abs(std::norm(m1->values[i]) + std::norm(m2->values[i]) - 1.0));
    }
    record("all_pass", 1e-12, worst);
  }

  {
    double worst = 0.0;
    for (auto [h, w] : {std::pair<std::size_t, std::size_t>{16, 16}, {15, 12}}) {
      for (const auto order : {RieszOrder{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
        const auto m = cache.get(order, h, w);
        for (std::size_t p = 0; p < h; ++p) {
          for (std::size_t q = 0; q < w; ++q) {
            worst = std::max(worst, std::abs((*m)((h - p) % h, (w - q) % w) - std::conj((*m)(p, q))));
          }
        }
      }
    }
    record("multiplier_hermitian", 1e-14, worst);
  }

  {
    std::uniform_int_distribution<long> shift(-31, 31);
    double worst_r = 0.0;
    double worst_phi = 0.0;
    const auto cfg = riesz_config(2, 4, 1.0);
    for (const auto& f : images) {
      const long dr = shift(rng);
      const long dc = shift(rng);
      const auto shifted = circular_shift(f, dr, dc);
      for (const auto n : {RieszOrder{1, 0}, {1, 1}}) {
        const auto a = riesz_transform(shifted, n, cache);
        const auto b = circular_shift(riesz_transform(f, n, cache), dr, dc);
        worst_r = std::max(worst_r, l2_norm(subtract(a, b)) / l2_norm(f));
      }
      const auto pa = extract_features(f, cfg, cache).values;
      const auto pb = extract_features(shifted, cfg, cache).values;
      worst_phi = std::max(worst_phi, rel_linf(pa, pb));
    }
    record("riesz_translation_equivariance", 1e-10, worst_r);
    record("feature_translation_invariance", 1e-10, worst_phi);
  }

  {
    double worst = 0.0;
    for (int m : {4, 8}) {
      const auto cfg = riesz_config(1, m, 1.0 / m);
      for (int k = 0; k < 10; ++k) {
        const auto f = uniform_image(16, 16, rng);
        const auto g = uniform_image(16, 16, rng);
        const auto sf = layer_S(f, cfg, cache);
        const auto sg = layer_S(g, cfg, cache);
        double lhs = 0.0;
        for (int r = 0; r < m; ++r) lhs += sum_of_squares(subtract(sf[r], sg[r]));
        worst = std::max(worst, lhs / sum_of_squares(subtract(f, g)) - 1.0);
      }
    }
    record("layer_nonexpansive", 1e-10, std::max(worst, 0.0));
  }

  {
    double worst = 0.0;
    for (const auto& f : images) {
      for (int order = 1; order <= 3; ++order) {
        for (const auto n : orders_of_degree(order)) {
          worst = std::max(worst, l2_norm(riesz_transform(f, n, cache)) / l2_norm(f) - 1.0);
        }
      }
    }
    record("riesz_contraction", 1e-12, std::max(worst, 0.0));
  }

  {
    double worst_r = 0.0;
    double worst_phi = 0.0;
    const auto cfg = riesz_config(3, 4, 1.0);
    for (int k = 0; k < 3; ++k) {
      const auto f = lowpass_image(128, 0.1, rng);
      for (const auto n : {RieszOrder{1, 0}, {0, 1}}) {
        const auto a = riesz_transform(block_average2(f), n, cache);
        const auto b = block_average2(riesz_transform(f, n, cache));
        worst_r = std::max(worst_r, relative_l2_error(a, b));
      }
      worst_phi = std::max(worst_phi, rel_linf(extract_features(f, cfg, cache).values,
                                               extract_features(block_average2(f), cfg, cache).values));
    }
    record("riesz_scale_equivariance", 0.05, worst_r);
    record("feature_scale_robustness", 0.05, worst_phi);
  }

  {
    const auto& f = images.front();
    const auto paths = enumerate_paths(3, 4);
    const auto base = extract_features(f, riesz_config(3, 4, 1.0), cache).values;
    double worst = 0.0;
    for (double c : {0.25, 4.0}) {
      const auto v = extract_features(f, riesz_config(3, 4, c), cache).values;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        const double expect = std::pow(c, static_cast<double>(paths[i].depth())) * base[i];
        if (expect != 0.0) worst = std::max(worst, std::abs(v[i] - expect) / std::abs(expect));
      }
    }
    record("scale_constant_homogeneity", 1e-10, worst);
  }

  return results;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inject_fault) err << "warning: fault injection enabled; DC is kept in every multiplier\n";
  const auto results = run_property_suite(config);
  std::size_t failed = 0;
  out << std::left << std::setw(34) << "property" << std::setw(12) << "tolerance" << std::setw(14)
      << "measured" << "result\n";
  for (const auto& r : results) {
    out << std::left << std::setw(34) << r.name << std::setw(12) << r.tolerance << std::setw(14)
        << r.measured << (r.passed ? "pass" : "FAIL") << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " properties passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace rieszfeat::cli
