#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclic_qsim/discretizer.hpp"
#include "cyclic_qsim/shift_models.hpp"

namespace cqsim {

/// A model family plus everything needed to instantiate it for one parameter value.
struct ModelSpec {
  ModelKind kind = ModelKind::Gaussian;
  double mu = 0.0;
  std::filesystem::path table;  ///< tabulated models only

  /// `param` is sigma, delta or x0 depending on the kind; ignored for uniform/tabulated.
  ShiftModel build(double param) const;
};

enum class SweepMode { Exact, Asymptotic, Both };

SweepMode parse_sweep_mode(const std::string& name);

struct SweepConfig {
  ModelSpec model;
  std::vector<double> params;  ///< one entry (any value) for uniform/tabulated
  std::vector<int> n_bits;     ///< strictly ascending
  SweepMode mode = SweepMode::Exact;
  Discretization scheme = Discretization::Midpoint;
  double plateau_tol = 1e-3;
  double causal_tol = kDefaultCausalTolerance;
  unsigned threads = 0;       ///< 0: hardware concurrency, capped by CYCLIC_QSIM_THREADS
  bool record_timing = true;  ///< false writes an empty wall_time_ms so reruns are byte-identical
};

/// Throws ParameterError if the grid is malformed or any point violates a model precondition.
void validate(const SweepConfig& config);

struct SweepRecord {
  std::string model;
  std::optional<double> param;
  int n_bits = 0;
  std::optional<double> c_mu_bits;
  std::optional<double> h_q_bits;
  std::optional<double> h_q_asym_bits;
  std::optional<double> bound_bits;
  std::optional<double> wall_time_ms;
  std::string error;  ///< empty when the grid point succeeded
};

struct Plateau {
  std::optional<double> param;
  std::optional<int> n_bits;  ///< smallest n with |H_Q(n) - H_Q(previous n)| <= tol
};

struct SweepResult {
  std::vector<SweepRecord> records;  ///< params outer, n_bits inner, in config order
  std::vector<Plateau> plateaus;
};

/// Evaluates every (param, n) grid point. Failing points carry an error message instead of values.
SweepResult run_sweep(const SweepConfig& config);

/// Worker count honoring the CYCLIC_QSIM_THREADS cap.
unsigned sweep_thread_count(unsigned requested, std::size_t work_items);

inline constexpr const char* kSweepCsvHeader =
    "model,param,n_bits,c_mu_bits,h_q_bits,h_q_asym_bits,bound_bits,wall_time_ms,error";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_sweep_json(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace cqsim
