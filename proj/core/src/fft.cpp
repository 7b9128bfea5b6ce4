#include "rieszfeat/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace rieszfeat {

namespace {

// FFTW's planner is not thread-safe; plan execution through the new-array
// interface is. Plans are created once per (H, W, direction) under a mutex and
// live for the lifetime of the process.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t height, std::size_t width, int sign) {
    const auto key = std::make_tuple(height, width, sign);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(height * width);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), buf,
                                      buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute_inplace(std::size_t height, std::size_t width, int sign,
                     std::vector<std::complex<double>>& data) {
  fftw_plan plan = plan_cache().get(height, width, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

Spectrum fft2(const ImageGrid& img) {
  std::vector<std::complex<double>> data(img.samples().begin(), img.samples().end());
  execute_inplace(img.height(), img.width(), FFTW_FORWARD, data);
  return Spectrum(img.height(), img.width(), std::move(data));
}

Spectrum fft2(std::size_t height, std::size_t width,
              std::vector<std::complex<double>> samples) {
  if (samples.size() != height * width) {
    throw std::invalid_argument("fft2: sample count does not match dimensions");
  }
  execute_inplace(height, width, FFTW_FORWARD, samples);
  return Spectrum(height, width, std::move(samples));
}

std::vector<std::complex<double>> ifft2_complex(Spectrum spec) {
  std::vector<std::complex<double>> data(spec.coeffs().begin(), spec.coeffs().end());
  execute_inplace(spec.height(), spec.width(), FFTW_BACKWARD, data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z *= scale;
  return data;
}

ImageGrid ifft2(const Spectrum& spec) {
  auto data = ifft2_complex(spec);
  double re2 = 0.0;
  double im2 = 0.0;
  std::vector<double> real(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    real[i] = data[i].real();
    re2 += data[i].real() * data[i].real();
    im2 += data[i].imag() * data[i].imag();
  }
  const double total = std::sqrt(re2 + im2);
  const double residue = total > 0.0 ? std::sqrt(im2) / total : 0.0;
  if (residue > kRealnessErrorTolerance) {
    throw RealnessError("inverse DFT has imaginary residue " + std::to_string(residue) +
                            " (non-Hermitian spectrum)",
                        residue);
  }
  return ImageGrid(spec.height(), spec.width(), std::move(real));
}

}  // namespace rieszfeat
