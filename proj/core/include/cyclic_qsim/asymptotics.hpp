#pragma once

#include <vector>

#include "cyclic_qsim/shift_models.hpp"

namespace cqsim {

/// Largest sigma for which the Gaussian entropy bound's monotonicity argument holds
/// (1/(2e sqrt(2 pi)) ~ 0.0734, rounded down to 0.073).
inline constexpr double kGaussianBoundSigmaLimit = 0.073;

/// Large-N eigenvalue spectrum, indexed k = -N/2 .. N/2 - 1.
///
/// Not renormalized: the deviation of the sum from 1 is the aliasing error
/// of the continuum approximation and is reported by normalization_defect().
struct AsymptoticSpectrum {
  ModelKind model_kind;
  double param;
  int n_bits;
  std::vector<double> lambdas;  ///< lambdas[i] belongs to k = i - N/2

  long long k_min() const noexcept { return -static_cast<long long>(lambdas.size() / 2); }
  double at(long long k) const { return lambdas.at(static_cast<std::size_t>(k - k_min())); }
  double sum() const;
  double normalization_defect() const { return sum() - 1.0; }
  /// Reorders to positional k = 0..N-1 (aliasing k -> k mod N).
  std::vector<double> positional() const;
};

/// Normal density with standard deviation 1/(4 pi sigma) sampled at integer k. Requires 0 < sigma <= 0.15.
AsymptoticSpectrum gaussian_asymptotic_spectrum(double sigma, int n_bits);
double gaussian_asymptotic_eigenvalue(double sigma, double k);

/// 2 delta sinc^2(2 k delta), sinc(x) = sin(pi x)/(pi x). Requires 0 < delta < 1/2.
AsymptoticSpectrum tophat_asymptotic_spectrum(double delta, int n_bits);
double tophat_asymptotic_eigenvalue(double delta, double k);

double normalized_sinc(double x);

/// Upper bound on H_Q (bits) for a Gaussian shift: 1/(2 ln 2) - (1 + 2A) log2 A with A = 2 sqrt(2 pi) sigma.
/// Throws ParameterError unless 0 < sigma < kGaussianBoundSigmaLimit.
double gaussian_entropy_bound(double sigma);

struct TopHatBound {
  double exact;    ///< 8 exp((1-e)/(2e)) / (pi ln2 sqrt(2 delta)) + 4 exp((1-e)/e) / ln2
  double rounded;  ///< 1.894 / sqrt(delta) + 3.067
};

/// Upper bound on H_Q (bits) for a top-hat shift of half-width delta.
TopHatBound tophat_entropy_bound(double delta);

/// Continuum limit of the overlap <S_0|S_j> at y = j/N: the circular autocorrelation of sqrt(P).
/// Gaussian and top-hat models only; y must lie in [-1/2, 1/2).
double asymptotic_gram_function(const ShiftModel& model, double y);

}  // namespace cqsim
