#include "cyclic_qsim/circuit.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cyclic_qsim/errors.hpp"
#include "cyclic_qsim/spectral.hpp"

namespace cqsim {

namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

MemoryStateSet build_memory_states(const TransitionColumn& col) {
  const std::size_t n = col.size();
  if (n > kCircuitMaxSites) {
    throw CapabilityError("circuit simulation limited to " + std::to_string(kCircuitMaxSites) + " sites, got " +
                          std::to_string(n));
  }
  MemoryStateSet out{col.n_bits(), ComplexMatrix(idx(n), idx(n)), Eigen::MatrixXd(idx(n), idx(n))};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) out.states(idx(k), idx(j)) = std::sqrt(col.transition(k, j));
  out.gram = (out.states.adjoint() * out.states).real();
  return out;
}

ComplexMatrix orthonormal_completion(const ComplexVector& first, double tolerance) {
  const Eigen::Index n = first.size();
  const double norm = first.norm();
  if (!(norm > tolerance)) throw ConstructionError("cannot complete a basis from a zero vector");

  ComplexMatrix basis(n, n);
  basis.col(0) = first / norm;
  Eigen::Index filled = 1;
  for (Eigen::Index c = 0; c < n && filled < n; ++c) {
    ComplexVector v = ComplexVector::Unit(n, c);
    // Two passes of modified Gram-Schmidt keep the result orthogonal to ~1e-15.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index b = 0; b < filled; ++b) v -= basis.col(b) * basis.col(b).dot(v);
    }
    const double vn = v.norm();
    if (vn < tolerance) continue;  // candidate already spanned
    basis.col(filled++) = v / vn;
  }
  if (filled < n) {
    throw ConstructionError("orthonormal completion found only " + std::to_string(filled) + " of " +
                            std::to_string(n) + " basis vectors");
  }
  return basis;
}

StepUnitary::StepUnitary(std::vector<ComplexMatrix> blocks, ComplexVector fiducial)
    : blocks_(std::move(blocks)), fiducial_(std::move(fiducial)) {
  for (const auto& b : blocks_) {
    if (b.rows() != fiducial_.size() || b.cols() != fiducial_.size())
      throw ParameterError("step unitary block has the wrong shape");
  }
}

ComplexMatrix StepUnitary::matrix() const {
  const std::size_t n = sites();
  ComplexMatrix u = ComplexMatrix::Zero(idx(n * n), idx(n * n));
  for (std::size_t j = 0; j < n; ++j) u.block(idx(j * n), idx(j * n), idx(n), idx(n)) = blocks_[j];
  return u;
}

ComplexVector StepUnitary::apply(const ComplexVector& joint) const {
  const std::size_t n = sites();
  if (static_cast<std::size_t>(joint.size()) != n * n) throw ParameterError("joint state has the wrong dimension");
  ComplexVector out(joint.size());
  for (std::size_t j = 0; j < n; ++j) out.segment(idx(j * n), idx(n)) = blocks_[j] * joint.segment(idx(j * n), idx(n));
  return out;
}

StepUnitary build_step_unitary(const MemoryStateSet& mset) {
  const std::size_t n = mset.size();
  const ComplexVector fiducial = mset.state(0);
  const ComplexMatrix source = orthonormal_completion(fiducial);
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexMatrix target;
    try {
      target = orthonormal_completion(mset.state(j));
    } catch (const ConstructionError& e) {
      throw ConstructionError("block " + std::to_string(j) + ": " + e.what());
    }
    blocks.push_back(target * source.adjoint());
  }
  return StepUnitary(std::move(blocks), fiducial);
}

double unitarity_defect(const StepUnitary& u) {
  const ComplexMatrix m = u.matrix();
  const ComplexMatrix defect = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return defect.cwiseAbs().maxCoeff();
}

SimulatorState SimulatorState::prepare(const MemoryStateSet& mset, std::size_t start, std::uint64_t seed) {
  if (start >= mset.size()) throw ParameterError("start site " + std::to_string(start) + " out of range");
  return SimulatorState{mset.state(start), seed, std::mt19937_64(seed), {}};
}

std::size_t step_measured(SimulatorState& sim, const StepUnitary& u) {
  const std::size_t n = u.sites();
  if (static_cast<std::size_t>(sim.memory.size()) != n) throw ParameterError("memory dimension mismatch");

  ComplexVector joint(idx(n * n));
  for (std::size_t m = 0; m < n; ++m) joint.segment(idx(m * n), idx(n)) = sim.memory(idx(m)) * u.fiducial();
  const ComplexVector evolved = u.apply(joint);

  // After the swap the tape holds the old memory label b and the memory holds
  // what was on the tape, so amplitude (memory a, tape b) = evolved[b * n + a].
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    acc += evolved.segment(idx(b * n), idx(n)).squaredNorm();
    cumulative[b] = acc;
  }
  const double u01 = uniform01(sim.rng) * acc;
  const std::size_t symbol = sample_inverse_cdf(cumulative, u01);

  ComplexVector memory = evolved.segment(idx(symbol * n), idx(n));
  sim.memory = memory / memory.norm();
  sim.history.push_back(symbol);
  return symbol;
}

DeferredRegister::DeferredRegister(const MemoryStateSet& mset, std::size_t start, std::size_t max_steps)
    : sites_(mset.size()), max_steps_(max_steps) {
  if (sites_ > kDeferredMaxSites) {
    throw CapabilityError("deferred mode limited to " + std::to_string(kDeferredMaxSites) + " sites");
  }
  std::size_t amplitudes = sites_;
  for (std::size_t i = 0; i < max_steps; ++i) {
    amplitudes *= sites_;
    if (amplitudes > kDeferredMaxAmplitudes) {
      throw CapabilityError("deferred mode with " + std::to_string(max_steps) + " steps at N=" +
                            std::to_string(sites_) + " exceeds the amplitude budget");
    }
  }
  if (start >= sites_) throw ParameterError("start site out of range");
  amps_ = mset.state(start);
}

void DeferredRegister::step(const StepUnitary& u) {
  if (u.sites() != sites_) throw ParameterError("unitary does not match register size");
  if (tapes_ >= max_steps_) throw CapabilityError("deferred register step budget exhausted");

  const std::size_t n = sites_;
  const std::size_t strings = ipow(n, tapes_);
  std::vector<ComplexVector> rotated(n);
  for (std::size_t m = 0; m < n; ++m) rotated[m] = u.block(m) * u.fiducial();

  ComplexVector next = ComplexVector::Zero(idx(n * strings * n));
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t s = 0; s < strings; ++s) {
      const std::complex<double> amp = amps_(idx(m * strings + s));
      if (amp == std::complex<double>(0.0)) continue;
      // (memory m, tapes s, new tape t) -> swap memory and new tape -> (memory t, tapes s, new tape m)
      for (std::size_t t = 0; t < n; ++t) next(idx(t * strings * n + s * n + m)) += amp * rotated[m](idx(t));
    }
  }
  amps_ = std::move(next);
  ++tapes_;
}

std::vector<double> DeferredRegister::tape_distribution() const {
  const std::size_t strings = ipow(sites_, tapes_);
  std::vector<double> dist(strings, 0.0);
  for (std::size_t m = 0; m < sites_; ++m)
    for (std::size_t s = 0; s < strings; ++s) dist[s] += std::norm(amps_(idx(m * strings + s)));
  return dist;
}

ComplexVector DeferredRegister::conditional_memory(const std::vector<std::size_t>& symbols) const {
  if (symbols.size() != tapes_) throw ParameterError("symbol string length does not match tape count");
  std::size_t s = 0;
  for (std::size_t sym : symbols) {
    if (sym >= sites_) throw ParameterError("symbol out of range");
    s = s * sites_ + sym;
  }
  const std::size_t strings = ipow(sites_, tapes_);
  ComplexVector mem(idx(sites_));
  for (std::size_t m = 0; m < sites_; ++m) mem(idx(m)) = amps_(idx(m * strings + s));
  const double norm = mem.norm();
  if (!(norm > 0.0)) throw ParameterError("tape string has zero probability");
  return mem / norm;
}

DeferredRegister::Outcome DeferredRegister::measure(std::mt19937_64& rng) const {
  const auto dist = tape_distribution();
  std::vector<double> cumulative(dist.size());
  std::partial_sum(dist.begin(), dist.end(), cumulative.begin());
  std::size_t s = sample_inverse_cdf(cumulative, uniform01(rng) * cumulative.back());

  Outcome out;
  out.symbols.assign(tapes_, 0);
  for (std::size_t i = tapes_; i-- > 0;) {
    out.symbols[i] = s % sites_;
    s /= sites_;
  }
  out.memory = conditional_memory(out.symbols);
  return out;
}

double stationary_density_entropy(const MemoryStateSet& mset) {
  const std::size_t n = mset.size();
  if (n > kCircuitMaxSites) throw CapabilityError("stationary density limited to 16 sites");
  ComplexMatrix rho = (mset.states * mset.states.adjoint()) / static_cast<double>(n);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("density-matrix eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> lambdas(ev.data(), ev.data() + ev.size());
  for (double& l : lambdas) {
    if (l < -kNegativeEigenvalueTolerance) throw NumericalError("density matrix has a negative eigenvalue");
    if (l < 0.0) l = 0.0;
  }
  return entropy_bits(lambdas);
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ParameterError("total_variation: length mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace cqsim
