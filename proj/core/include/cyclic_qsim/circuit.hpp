#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "cyclic_qsim/discretizer.hpp"

namespace cqsim {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kCircuitMaxSites = 16;
inline constexpr std::size_t kDeferredMaxSites = 8;
inline constexpr std::size_t kDeferredMaxAmplitudes = 32768;  // 8^5: N <= 8 with M <= 4 tapes
inline constexpr double kCompletionTolerance = 1e-8;

/// The quantum memory states |S_j> = sum_k sqrt(p_kj) |k> and their overlaps.
struct MemoryStateSet {
  int n_bits;
  ComplexMatrix states;  ///< column j is |S_j>
  Eigen::MatrixXd gram;  ///< gram(i, j) = <S_i|S_j>

  std::size_t size() const noexcept { return static_cast<std::size_t>(states.cols()); }
  ComplexVector state(std::size_t j) const { return states.col(static_cast<Eigen::Index>(j)); }
};

/// Builds the memory states. Throws CapabilityError for more than 16 sites.
MemoryStateSet build_memory_states(const TransitionColumn& col);

/// Controlled unitary U = sum_j |j><j| (x) V_j with V_j |phi> = |S_j>, phi = |S_0>.
///
/// Stored block by block; matrix() assembles the full N^2 x N^2 operator on
/// memory (x) tape, with basis index memory * N + tape.
class StepUnitary {
 public:
  explicit StepUnitary(std::vector<ComplexMatrix> blocks, ComplexVector fiducial);

  std::size_t sites() const noexcept { return blocks_.size(); }
  const ComplexMatrix& block(std::size_t j) const { return blocks_[j]; }
  const ComplexVector& fiducial() const noexcept { return fiducial_; }
  ComplexMatrix matrix() const;

  /// Applies U to a joint memory (x) tape vector laid out as memory * N + tape.
  ComplexVector apply(const ComplexVector& joint) const;

 private:
  std::vector<ComplexMatrix> blocks_;
  ComplexVector fiducial_;
};

/// Completes each block by Gram-Schmidt against computational-basis candidates in
/// index order. Throws ConstructionError if a complete orthonormal basis cannot be formed.
StepUnitary build_step_unitary(const MemoryStateSet& mset);

/// max |(U^dagger U - I)_{ab}|.
double unitarity_defect(const StepUnitary& u);

/// Orthonormal basis whose first column is `first` (normalized), completed from e_0, e_1, ...
ComplexMatrix orthonormal_completion(const ComplexVector& first, double tolerance = kCompletionTolerance);

/// Single-owner state of the measured-tape simulator.
struct SimulatorState {
  ComplexVector memory;
  std::uint64_t rng_seed;
  std::mt19937_64 rng;
  std::vector<std::size_t> history;

  /// Memory prepared in |S_start>.
  static SimulatorState prepare(const MemoryStateSet& mset, std::size_t start, std::uint64_t seed);
};

/// One measured step: U on memory (x) |phi>, coherent swap, Born-rule sample of the tape
/// in the computational basis. Returns the emitted symbol; memory collapses to |S_symbol>.
std::size_t step_measured(SimulatorState& sim, const StepUnitary& u);

/// Joint state of memory and every emitted tape when no tape is measured.
///
/// Amplitudes are laid out as memory * N^M + tape_1 * N^(M-1) + ... + tape_M.
class DeferredRegister {
 public:
  DeferredRegister(const MemoryStateSet& mset, std::size_t start, std::size_t max_steps);

  /// Appends a fresh tape in |phi>, applies U to (memory, tape) and swaps them.
  /// Throws CapabilityError once the amplitude budget would be exceeded.
  void step(const StepUnitary& u);

  std::size_t sites() const noexcept { return sites_; }
  std::size_t tapes() const noexcept { return tapes_; }
  const ComplexVector& amplitudes() const noexcept { return amps_; }

  /// Born distribution over tape strings, indexed tape_1 * N^(M-1) + ... + tape_M.
  std::vector<double> tape_distribution() const;

  struct Outcome {
    std::vector<std::size_t> symbols;
    ComplexVector memory;  ///< normalized conditional memory state
  };

  /// Projective measurement of all tapes at once (does not modify the register).
  Outcome measure(std::mt19937_64& rng) const;

  /// Memory state conditional on a given tape string.
  ComplexVector conditional_memory(const std::vector<std::size_t>& symbols) const;

 private:
  std::size_t sites_;
  std::size_t tapes_ = 0;
  std::size_t max_steps_;
  ComplexVector amps_;
};

/// von Neumann entropy (bits) of rho = (1/N) sum_j |S_j><S_j| by dense diagonalization.
double stationary_density_entropy(const MemoryStateSet& mset);

/// Total-variation distance between two distributions of equal length.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace cqsim
