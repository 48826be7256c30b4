#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "cyclic_qsim/discretizer.hpp"
#include "cyclic_qsim/errors.hpp"
#include "cyclic_qsim/spectral.hpp"
#include "oracles.hpp"

namespace cqsim {
namespace {

TEST(Discretize, DiracLandsOnSite) {
  const auto col = discretize(ShiftModel::dirac(0.25), 2);
  EXPECT_EQ(col.probs(), (std::vector<double>{0.0, 1.0, 0.0, 0.0}));
}

TEST(Discretize, UniformIsFlat) {
  const auto col = discretize(ShiftModel::uniform(), 3);
  for (double p : col.probs()) EXPECT_NEAR(p, 1.0 / 8.0, 1e-15);
}

TEST(Discretize, GaussianMatchesQuadratureOracle) {
  const int n = 256;
  const auto col = discretize(ShiftModel::gaussian(0.0, 0.01), 8);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double centre = static_cast<double>(k) / n;
    const double oracle = testing::wrapped_normal_mass(centre - 0.5 / n, centre + 0.5 / n, 0.0, 0.01);
    worst = std::max(worst, std::abs(col[static_cast<std::size_t>(k)] - oracle));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Discretize, RejectsOutOfRangePrecision) {
  EXPECT_THROW(discretize(ShiftModel::uniform(), 0), ParameterError);
  EXPECT_THROW(discretize(ShiftModel::uniform(), 25), ParameterError);
}

TEST(Discretize, ColumnsAreStochasticAndUniformIsStationary) {
  const std::vector<ShiftModel> models = {ShiftModel::gaussian(0.2, 0.03), ShiftModel::tophat(0.6, 0.11),
                                          ShiftModel::tabulated({{0.1, 2.0}, {0.4, 0.5}, {0.7, 0.0}})};
  for (const auto& m : models) {
    for (auto scheme : {Discretization::Midpoint, Discretization::Averaged}) {
      const auto col = discretize(m, 6, scheme);
      const double sum = std::accumulate(col.probs().begin(), col.probs().end(), 0.0);
      EXPECT_NEAR(sum, 1.0, 1e-10);
      const std::vector<double> flat(col.size(), 1.0 / static_cast<double>(col.size()));
      const auto next = apply_transition(col, flat);
      for (double v : next) EXPECT_NEAR(v, flat[0], 1e-10);
      // Every row of the implied matrix also sums to one.
      for (std::size_t from = 0; from < col.size(); from += 7) {
        double row = 0.0;
        for (std::size_t to = 0; to < col.size(); ++to) row += col.transition(to, from);
        EXPECT_NEAR(row, 1.0, 1e-10);
      }
    }
  }
}

// Cells centred on k/N do not nest under refinement: fine cells 2k-1 and 2k
// together cover [(k - 3/4)/N, (k + 1/4)/N). Merging must agree with the mass
// over that union.
TEST(Discretize, RefinementMergesToUnionOfCells) {
  for (const auto& m : {ShiftModel::gaussian(0.13, 0.02), ShiftModel::tophat(0.4, 0.09)}) {
    for (int bits = 2; bits <= 9; ++bits) {
      const auto fine = discretize(m, bits + 1);
      const auto n = static_cast<double>(std::size_t{1} << bits);
      for (std::size_t k = 0; k < (std::size_t{1} << bits); ++k) {
        const double merged = fine[(2 * k + fine.size() - 1) % fine.size()] + fine[2 * k];
        const double kd = static_cast<double>(k);
        EXPECT_NEAR(merged, interval_probability(m, (kd - 0.75) / n, (kd + 0.25) / n), 1e-10);
      }
    }
  }
}

TEST(Discretize, AveragedSchemeExactCases) {
  // Uniform stays flat; a Dirac on a site stays a point; between sites it splits linearly.
  const auto u = discretize(ShiftModel::uniform(), 4, Discretization::Averaged);
  for (double p : u.probs()) EXPECT_NEAR(p, 1.0 / 16.0, 1e-15);
  const auto d0 = discretize(ShiftModel::dirac(0.25), 2, Discretization::Averaged);
  EXPECT_NEAR(d0[1], 1.0, 1e-15);
  const auto d1 = discretize(ShiftModel::dirac(0.3125), 2, Discretization::Averaged);
  EXPECT_NEAR(d1[1], 0.75, 1e-15);
  EXPECT_NEAR(d1[2], 0.25, 1e-15);
}

TEST(Discretize, AveragedSchemeMatchesDoubleIntegralOracle) {
  // p_k = N * integral over source offsets s in the cell of the interval mass.
  const double sigma = 0.04;
  const auto col = discretize(ShiftModel::gaussian(0.0, sigma), 4, Discretization::Averaged);
  const double n = 16.0;
  for (std::size_t k : {0u, 1u, 2u, 15u}) {
    const double c = static_cast<double>(k) / n;
    const double oracle = n * testing::adaptive_simpson(
                                  [&](double s) {
                                    return testing::wrapped_normal_mass(c - 0.5 / n - s, c + 0.5 / n - s, 0.0, sigma);
                                  },
                                  -0.5 / n, 0.5 / n, 1e-13);
    EXPECT_NEAR(col[k], oracle, 1e-9) << k;
  }
}

TEST(Discretize, AveragedAndMidpointEntropiesConverge) {
  const auto m = ShiftModel::gaussian(0.0, 0.02);
  double previous_gap = 1e9;
  for (int bits : {6, 8, 10}) {
    const double gap = std::abs(quantum_memory_bits(discretize(m, bits)) -
                                quantum_memory_bits(discretize(m, bits, Discretization::Averaged)));
    EXPECT_LT(gap, previous_gap);
    previous_gap = gap;
  }
  EXPECT_LT(previous_gap, 1e-3);
}

TEST(CausalStructure, UniformCollapsesToOneState) {
  const auto cs = causal_structure(discretize(ShiftModel::uniform(), 4));
  EXPECT_EQ(cs.n_distinct, 1u);
  EXPECT_EQ(cs.c_mu_bits, 0.0);
}

TEST(CausalStructure, GaussianHasOneStatePerSite) {
  const auto cs = causal_structure(discretize(ShiftModel::gaussian(0.0, 0.01), 8));
  EXPECT_EQ(cs.n_distinct, 256u);
  EXPECT_EQ(cs.c_mu_bits, 8.0);
}

TEST(CausalStructure, DiracIsAPermutation) {
  const auto cs = causal_structure(discretize(ShiftModel::dirac(0.5), 4));
  EXPECT_EQ(cs.n_distinct, 16u);
  EXPECT_EQ(cs.c_mu_bits, 4.0);
}

TEST(CausalStructure, DetectsPartialShiftSymmetry) {
  // Period-4 column at N = 16: four distinct rows.
  std::vector<double> p(16, 0.0);
  for (std::size_t k = 0; k < 16; k += 4) p[k] = 0.25;
  const auto cs = causal_structure(TransitionColumn(4, p));
  EXPECT_EQ(cs.n_distinct, 4u);
  EXPECT_DOUBLE_EQ(cs.c_mu_bits, 2.0);
}

TEST(CausalStructure, ComplexityNeverExceedsPrecision) {
  for (int bits = 1; bits <= 12; ++bits) {
    for (const auto& m : {ShiftModel::gaussian(0.3, 0.01), ShiftModel::tophat(0.0, 0.2)}) {
      const auto cs = causal_structure(discretize(m, bits));
      EXPECT_LE(cs.c_mu_bits, bits);
      EXPECT_EQ(cs.c_mu_bits, bits) << m.describe() << " n=" << bits;
    }
  }
  EXPECT_THROW(causal_structure(discretize(ShiftModel::uniform(), 2), -1.0), ParameterError);
}

TEST(Trajectory, DiracRotatesDeterministically) {
  const auto col = discretize(ShiftModel::dirac(0.25), 2);
  EXPECT_EQ(sample_classical_trajectory(col, 0, 3, 99), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Trajectory, EmptyAndOutOfRange) {
  const auto col = discretize(ShiftModel::gaussian(0.0, 0.05), 3);
  EXPECT_TRUE(sample_classical_trajectory(col, 0, 0, 1).empty());
  EXPECT_THROW(sample_classical_trajectory(col, 8, 3, 1), ParameterError);
}

TEST(Trajectory, UniformCoinIsFair) {
  // 10^4 fair flips: 4 sigma = 0.02 around 0.5.
  const auto path = sample_classical_trajectory(discretize(ShiftModel::uniform(), 1), 0, 10000, 2024);
  const auto ones = std::count(path.begin(), path.end(), std::size_t{1});
  const double freq = static_cast<double>(ones) / 10000.0;
  EXPECT_GE(freq, 0.48);
  EXPECT_LE(freq, 0.52);
}

TEST(Trajectory, DeterministicGivenSeed) {
  const auto col = discretize(ShiftModel::gaussian(0.1, 0.05), 5);
  EXPECT_EQ(sample_classical_trajectory(col, 3, 500, 7), sample_classical_trajectory(col, 3, 500, 7));
  EXPECT_NE(sample_classical_trajectory(col, 3, 500, 7), sample_classical_trajectory(col, 3, 500, 8));
}

TEST(TransitionColumn, ValidatesInput) {
  EXPECT_THROW(TransitionColumn(2, {0.5, 0.5}), ParameterError);
  EXPECT_THROW(TransitionColumn(1, {0.7, 0.7}), ParameterError);
  EXPECT_THROW(TransitionColumn(1, {1.5, -0.5}), ParameterError);
  EXPECT_NO_THROW(TransitionColumn(1, {0.25, 0.75}));
}

TEST(TransitionColumn, CsvRoundTrip) {
  const auto col = discretize(ShiftModel::gaussian(0.2, 0.03), 5);
  std::stringstream ss;
  write_column_csv(ss, col);
  const auto back = read_column_csv(ss);
  EXPECT_EQ(back.n_bits(), 5);
  EXPECT_EQ(back.probs(), col.probs());

  std::stringstream bad("index,probability\n0,0.5\n1,0.25\n2,0.25\n");
  EXPECT_THROW(read_column_csv(bad), ParameterError);
}

}  // namespace
}  // namespace cqsim
