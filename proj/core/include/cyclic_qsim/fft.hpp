#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cqsim {

enum class FftDirection {
  Forward,  ///< X_k = sum_j x_j exp(-2 pi i j k / N)
  Inverse,  ///< x_j = (1/N) sum_k X_k exp(+2 pi i j k / N)
};

/// In-place iterative radix-2 Cooley-Tukey transform. The length must be a power of two.
void fft_inplace(std::span<std::complex<double>> data, FftDirection direction = FftDirection::Forward);

/// Forward transform of a real sequence.
std::vector<std::complex<double>> fft_real(std::span<const double> data);

}  // namespace cqsim
