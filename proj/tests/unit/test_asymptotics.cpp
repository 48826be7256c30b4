#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cyclic_qsim/asymptotics.hpp"
#include "cyclic_qsim/errors.hpp"
#include "cyclic_qsim/spectral.hpp"

namespace cqsim {
namespace {

double normal_pdf(double x, double sd) {
  return std::exp(-0.5 * (x / sd) * (x / sd)) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

TEST(GaussianAsymptotic, CentralValue) {
  const auto a = gaussian_asymptotic_spectrum(0.01, 12);
  const double expected = normal_pdf(0.0, 1.0 / (4.0 * std::numbers::pi * 0.01));
  EXPECT_NEAR(a.at(0), expected, 1e-15);
  EXPECT_NEAR(a.at(0), 0.0501326, 1e-7);
  EXPECT_NEAR(a.at(7), normal_pdf(7.0, 1.0 / (4.0 * std::numbers::pi * 0.01)), 1e-15);
}

TEST(GaussianAsymptotic, AgreesWithExactSpectrumAtLargeN) {
  const auto exact = gram_spectrum_dft(discretize(ShiftModel::gaussian(0.0, 0.01), 12)).lambdas();
  const auto a = gaussian_asymptotic_spectrum(0.01, 12);
  EXPECT_LE(std::abs(exact[0] - a.at(0)) / exact[0], 0.01);
  for (long long k = -2048; k < 2048; ++k) {
    const double e = exact[static_cast<std::size_t>((k + 4096) % 4096)];
    if (e >= 1e-6) EXPECT_LE(std::abs(e - a.at(k)) / e, 0.01) << k;
  }
}

TEST(GaussianAsymptotic, SymmetricAndNormalized) {
  const auto a = gaussian_asymptotic_spectrum(0.05, 8);
  for (long long k = 1; k < 128; ++k) EXPECT_EQ(a.at(k), a.at(-k));
  EXPECT_NEAR(gaussian_asymptotic_spectrum(0.01, 12).sum(), 1.0, 1e-6);
  EXPECT_NEAR(gaussian_asymptotic_spectrum(0.01, 12).normalization_defect(), 0.0, 1e-6);
}

TEST(GaussianAsymptotic, RejectsSigmaOutOfRange) {
  EXPECT_THROW(gaussian_asymptotic_spectrum(0.0, 4), ParameterError);
  EXPECT_THROW(gaussian_asymptotic_spectrum(0.2, 4), ParameterError);
}

TEST(TopHatAsymptotic, Values) {
  const auto a = tophat_asymptotic_spectrum(0.25, 11);
  EXPECT_NEAR(a.at(1), 0.5 * std::pow(2.0 / std::numbers::pi, 2), 1e-15);
  EXPECT_NEAR(a.at(1), 0.2026, 1e-4);
  for (double delta : {0.01, 0.1, 0.37}) EXPECT_EQ(tophat_asymptotic_spectrum(delta, 6).at(0), 2.0 * delta);
  EXPECT_LE(tophat_asymptotic_spectrum(0.01, 8).at(50), 1e-12);
  EXPECT_LE(tophat_asymptotic_spectrum(0.01, 8).at(-100), 1e-12);
  EXPECT_THROW(tophat_asymptotic_spectrum(0.5, 4), ParameterError);
}

// The discretized box has fractional edge cells, so its spectrum follows
// sinc^2 closely in the main lobe but not near the side-lobe zeros.
TEST(TopHatAsymptotic, MainLobeMatchesExactSpectrum) {
  const auto exact = gram_spectrum_dft(discretize(ShiftModel::tophat(0.0, 0.25), 11)).lambdas();
  const auto a = tophat_asymptotic_spectrum(0.25, 11);
  EXPECT_LE(std::abs(exact[0] - a.at(0)) / exact[0], 0.01);
  EXPECT_LE(std::abs(exact[1] - a.at(1)) / exact[1], 0.01);
}

TEST(AsymptoticSpectrum, PositionalReordering) {
  const auto a = gaussian_asymptotic_spectrum(0.05, 3);
  const auto p = a.positional();
  for (long long k = -4; k < 4; ++k) EXPECT_EQ(p[static_cast<std::size_t>((k + 8) % 8)], a.at(k));
}

TEST(GaussianBound, ValueAtOnePercent) {
  // Independent evaluation in nats, converted to bits.
  const double a = 2.0 * std::sqrt(2.0 * std::numbers::pi) * 0.01;
  const double nats = 0.5 - (1.0 + 2.0 * a) * std::log(a);
  EXPECT_NEAR(gaussian_entropy_bound(0.01), nats / std::log(2.0), 1e-12);
  EXPECT_NEAR(gaussian_entropy_bound(0.01), 5.472, 5e-4);
}

TEST(GaussianBound, ValidityGuard) {
  EXPECT_THROW(gaussian_entropy_bound(0.073), ParameterError);
  EXPECT_THROW(gaussian_entropy_bound(0.0), ParameterError);
  EXPECT_GT(gaussian_entropy_bound(0.0729), 0.0);
  EXPECT_LT(1.0 / (2.0 * std::numbers::e * std::sqrt(2.0 * std::numbers::pi)), 0.0734);
}

TEST(GaussianBound, HalvingSigmaAddsABitToTheLeadingTerm) {
  for (double sigma : {0.005, 0.01, 0.02, 0.03}) {
    EXPECT_NEAR(-std::log2(sigma / 2.0) + std::log2(sigma), 1.0, 1e-12);
    const double a = 2.0 * std::sqrt(2.0 * std::numbers::pi) * sigma;
    const double gain = gaussian_entropy_bound(sigma / 2.0) - gaussian_entropy_bound(sigma);
    EXPECT_NEAR(gain, (1.0 + a) + a * std::log2(a), 1e-12);
  }
  for (double sigma : {1e-3, 1e-4, 1e-6}) {
    const double gain = gaussian_entropy_bound(sigma / 2.0) - gaussian_entropy_bound(sigma);
    EXPECT_GE(gain, 0.9);
    EXPECT_LE(gain, 1.2);
  }
}

TEST(TopHatBound, ExactAndRoundedForms) {
  EXPECT_NEAR(tophat_entropy_bound(0.01).rounded, 22.007, 1e-12);
  EXPECT_NEAR(tophat_entropy_bound(0.25).rounded, 6.855, 1e-12);
  for (double delta : {1e-4, 0.01, 0.1, 0.25, 0.49}) {
    const auto b = tophat_entropy_bound(delta);
    EXPECT_LE(b.exact, b.rounded + 1e-3);
    EXPECT_LE(std::abs(b.exact - b.rounded) / b.rounded, 1e-3);
  }
  EXPECT_THROW(tophat_entropy_bound(0.0), ParameterError);
}

TEST(Bounds, DominateExactEntropy) {
  for (int bits = 2; bits <= 14; bits += 2) {
    for (double sigma : {0.005, 0.01, 0.03, 0.07}) {
      EXPECT_LE(quantum_memory_bits(discretize(ShiftModel::gaussian(0.0, sigma), bits)), gaussian_entropy_bound(sigma));
    }
    for (double delta : {0.01, 0.05, 0.2, 0.45}) {
      EXPECT_LE(quantum_memory_bits(discretize(ShiftModel::tophat(0.0, delta), bits)), tophat_entropy_bound(delta).exact);
    }
  }
}

TEST(Convergence, GaussianEntropyMatchesAsymptotic) {
  for (double sigma : {0.01, 0.05}) {
    for (int bits : {10, 12}) {
      const double exact = quantum_memory_bits(discretize(ShiftModel::gaussian(0.0, sigma), bits));
      const double asym = entropy_bits(gaussian_asymptotic_spectrum(sigma, bits).lambdas);
      EXPECT_NEAR(exact, asym, 0.02);
    }
  }
}

TEST(GramFunction, Examples) {
  EXPECT_DOUBLE_EQ(asymptotic_gram_function(ShiftModel::tophat(0.0, 0.1), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(asymptotic_gram_function(ShiftModel::tophat(0.0, 0.1), 0.2), 0.0);
  EXPECT_DOUBLE_EQ(asymptotic_gram_function(ShiftModel::tophat(0.3, 0.1), -0.1), 0.5);
  EXPECT_NEAR(asymptotic_gram_function(ShiftModel::gaussian(0.0, 0.05), 0.0), 1.0, 1e-12);
  // Narrow Gaussian: sqrt-autocorrelation is exp(-y^2 / (8 sigma^2)).
  EXPECT_NEAR(asymptotic_gram_function(ShiftModel::gaussian(0.2, 0.02), 0.05), std::exp(-0.0025 / (8 * 0.0004)), 1e-10);
  EXPECT_THROW(asymptotic_gram_function(ShiftModel::dirac(0.1), 0.0), CapabilityError);
  EXPECT_THROW(asymptotic_gram_function(ShiftModel::tophat(0.0, 0.1), 0.5), ParameterError);
}

TEST(GramFunction, ExactOverlapsConverge) {
  for (const auto& m : {ShiftModel::gaussian(0.0, 0.05), ShiftModel::tophat(0.0, 0.05)}) {
    const auto row = overlap_row(discretize(m, 12));
    double worst = 0.0;
    for (std::size_t j = 0; j < row.size(); j += 3) {
      double y = static_cast<double>(j) / 4096.0;
      if (y >= 0.5) y -= 1.0;
      worst = std::max(worst, std::abs(row[j] - asymptotic_gram_function(m, y)));
    }
    EXPECT_LE(worst, 0.01) << m.describe();
  }
}

TEST(GramFunction, NeighbourOverlapGrowsWithPrecision) {
  double previous = 0.0;
  for (int bits = 1; bits <= 16; ++bits) {
    const auto row = overlap_row(discretize(ShiftModel::gaussian(0.0, 0.05), bits));
    const double s01 = row[1 % row.size()];
    EXPECT_GE(s01, previous - 1e-15) << bits;
    previous = s01;
  }
}

}  // namespace
}  // namespace cqsim
