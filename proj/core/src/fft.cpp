#include "cyclic_qsim/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "cyclic_qsim/errors.hpp"

namespace cqsim {

void fft_inplace(std::span<std::complex<double>> data, FftDirection direction) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) throw ParameterError("fft length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles evaluated directly rather than by recurrence so error does not grow with n.
  const double sign = direction == FftDirection::Forward ? -1.0 : 1.0;
  std::vector<std::complex<double>> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> t = twiddle[k * stride] * data[start + k + half];
        const std::complex<double> u = data[start + k];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }

  if (direction == FftDirection::Inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= scale;
  }
}

std::vector<std::complex<double>> fft_real(std::span<const double> data) {
  std::vector<std::complex<double>> out(data.begin(), data.end());
  fft_inplace(out, FftDirection::Forward);
  return out;
}

}  // namespace cqsim
