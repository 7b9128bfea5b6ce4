#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "rieszfeat/image.hpp"

namespace rieszfeat {

/// Raised by ifft2 when the inverse transform of a spectrum is not real,
/// which means a multiplier broke Hermitian symmetry.
class RealnessError : public std::runtime_error {
 public:
  RealnessError(const std::string& what, double residue)
      : std::runtime_error(what), residue_(residue) {}
  double residue() const noexcept { return residue_; }

 private:
  double residue_;
};

/// Imaginary residue above this fraction of the output norm is an error.
inline constexpr double kRealnessErrorTolerance = 1e-6;

/// Forward 2D DFT, unnormalized: F(p,q) = sum f(r,c) exp(-2 pi i (pr/H + qc/W)).
Spectrum fft2(const ImageGrid& img);

/// Forward 2D DFT of complex samples (row-major, height x width).
Spectrum fft2(std::size_t height, std::size_t width,
              std::vector<std::complex<double>> samples);

/// Inverse 2D DFT with the 1/(H W) factor, returning the real part.
/// Throws RealnessError if ||imag|| > kRealnessErrorTolerance * ||output||.
ImageGrid ifft2(const Spectrum& spec);

/// Inverse 2D DFT with the 1/(H W) factor, keeping the complex result.
std::vector<std::complex<double>> ifft2_complex(Spectrum spec);

}  // namespace rieszfeat
