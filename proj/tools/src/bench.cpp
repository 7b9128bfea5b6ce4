#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

#include "commands.hpp"
#include "rieszfeat/feature_csv.hpp"
#include "rieszfeat/fft.hpp"
#include "rieszfeat/representation.hpp"

namespace rieszfeat::cli {

namespace {

double median_ms(int repeats, const std::function<void()>& fn) {
  fn();  // warm plan and multiplier caches
  std::vector<double> t;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

}  // namespace

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream&) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MultiplierCache cache;

  struct Row {
    std::string op;
    std::size_t size;
    double ms;
  };
  std::vector<Row> rows;
  for (std::size_t n : config.bench_sizes) {
    std::vector<double> s(n * n);
    for (auto& v : s) v = u(rng);
    const ImageGrid f(n, n, std::move(s));
    rows.push_back({"fft_round_trip", n, median_ms(config.bench_repeats, [&] { (void)ifft2(fft2(f)); })});
    rows.push_back({"riesz_transform", n,
                    median_ms(config.bench_repeats, [&] { (void)riesz_transform(f, {1, 0}, cache); })});
    rows.push_back({"layer_S", n,
                    median_ms(config.bench_repeats, [&] { (void)layer_S(f, config.riesz, cache); })});
    rows.push_back({"extract_features", n, median_ms(config.bench_repeats, [&] {
                      (void)extract_features(f, config.riesz, cache);
                    })});
  }

  out << std::left << std::setw(20) << "operation" << std::setw(8) << "size" << "median_ms\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(20) << r.op << std::setw(8) << r.size << std::fixed
        << std::setprecision(3) << r.ms << '\n';
    out.unsetf(std::ios::floatfield);
  }
  if (!config.output.empty()) {
    std::ofstream csv(config.output);
    if (!csv) throw std::runtime_error("cannot write " + config.output);
    csv << "operation,size,median_ms\n";
    for (const auto& r : rows) csv << r.op << ',' << r.size << ',' << format_double(r.ms) << '\n';
  }
  return kExitOk;
}

}  // namespace rieszfeat::cli
