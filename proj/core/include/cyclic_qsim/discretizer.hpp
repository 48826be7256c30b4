#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cyclic_qsim/shift_models.hpp"

namespace cqsim {

inline constexpr int kMaxBits = 24;
inline constexpr double kDefaultCausalTolerance = 1e-12;

/// How the source site is represented when computing p_{k0}.
enum class Discretization {
  Midpoint,  ///< the walker starts exactly at y_0 = 0
  Averaged,  ///< the walker starts uniformly inside the cell of y_0
};

/// First column p_{k0} of the N x N circulant column-stochastic matrix, N = 2^n_bits.
///
/// The full matrix is p_{kj} = probs[(k - j) mod N]; it is never materialized.
class TransitionColumn {
 public:
  /// Validates nonnegativity and unit sum (within 1e-10).
  TransitionColumn(int n_bits, std::vector<double> probs);

  int n_bits() const noexcept { return n_bits_; }
  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double operator[](std::size_t k) const { return probs_[k]; }

  /// p_{to, from}: probability of moving from site `from` to site `to`.
  double transition(std::size_t to, std::size_t from) const {
    return probs_[(to + size() - from) % size()];
  }

 private:
  int n_bits_;
  std::vector<double> probs_;
};

/// Number of sites for a precision, validating 1 <= n_bits <= kMaxBits.
std::size_t site_count(int n_bits);

/// Probabilities of landing in each rounding cell |y - k/N| < 1/(2N), starting from site 0.
TransitionColumn discretize(const ShiftModel& model, int n_bits,
                            Discretization scheme = Discretization::Midpoint);

struct CausalStructure {
  std::size_t n_distinct;
  double c_mu_bits;
};

/// Counts distinct causal states. Rows j and j+s of a circulant matrix coincide
/// exactly when the column is invariant under a cyclic shift by s, so the
/// count is the smallest such shift period.
CausalStructure causal_structure(const TransitionColumn& col, double tol = kDefaultCausalTolerance);

/// Classical Markov-chain trajectory (not including `start`). Deterministic given `seed`.
std::vector<std::size_t> sample_classical_trajectory(const TransitionColumn& col, std::size_t start,
                                                     std::size_t steps, std::uint64_t seed);

/// Uniform double in [0, 1) built from the top 53 bits of a 64-bit draw.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Index drawn from a cumulative distribution (last entry ~1) by inverse CDF.
std::size_t sample_inverse_cdf(const std::vector<double>& cumulative, double u);

/// Applies the implied transition matrix to a distribution over sites (cyclic convolution).
std::vector<double> apply_transition(const TransitionColumn& col, const std::vector<double>& dist);

void write_column_csv(std::ostream& out, const TransitionColumn& col);
TransitionColumn read_column_csv(std::istream& in);
TransitionColumn read_column_csv(const std::filesystem::path& path);

}  // namespace cqsim
