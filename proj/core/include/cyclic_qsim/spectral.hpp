#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "cyclic_qsim/discretizer.hpp"

namespace cqsim {

enum class SpectrumMethod { DftExact, DenseOracle, Asymptotic };

std::string_view to_string(SpectrumMethod method);

inline constexpr double kNegativeEigenvalueTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr std::size_t kDenseOracleMaxSites = 512;

/// Eigenvalues of the stationary memory ensemble rho (equivalently of its Gram matrix).
///
/// Construction clamps values in [-1e-10, 0) to zero, rejects anything more
/// negative with NumericalError, and requires the trace to be 1 within 1e-9.
class Spectrum {
 public:
  Spectrum(std::vector<double> lambdas, SpectrumMethod method, int n_bits);

  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  SpectrumMethod method() const noexcept { return method_; }
  int n_bits() const noexcept { return n_bits_; }
  std::size_t size() const noexcept { return lambdas_.size(); }
  double trace() const;

 private:
  std::vector<double> lambdas_;
  SpectrumMethod method_;
  int n_bits_;
};

/// lambda_k = (1/N) F[sqrt p_j](k) * F[sqrt p_{N-j}](k), in positional order k = 0..N-1.
Spectrum gram_spectrum_dft(const TransitionColumn& col);

/// Builds the Gram matrix g_ab = (1/N) sum_c sqrt(p_ca p_cb) densely and diagonalizes it.
/// Eigenvalues are returned in ascending order. Throws CapabilityError above 512 sites.
Spectrum dense_oracle_spectrum(const TransitionColumn& col);

/// Overlaps <S_0|S_j> for j = 0..N-1, via the circular correlation of sqrt(p).
std::vector<double> overlap_row(const TransitionColumn& col);

/// -sum lambda log2 lambda with 0 log 0 = 0, accumulated largest-first.
double entropy_bits(std::span<const double> lambdas);
double von_neumann_entropy(const Spectrum& spectrum);

/// H_Q of the discretized process: entropy of the DFT spectrum.
double quantum_memory_bits(const TransitionColumn& col);

/// Writes "k,lambda" rows with k running from -N/2 to N/2 - 1.
void write_spectrum_csv(std::ostream& out, std::span<const double> positional_lambdas);

}  // namespace cqsim
