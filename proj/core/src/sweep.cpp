#include "cyclic_qsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "cyclic_qsim/asymptotics.hpp"
#include "cyclic_qsim/csv_io.hpp"
#include "cyclic_qsim/errors.hpp"
#include "cyclic_qsim/spectral.hpp"

namespace cqsim {

namespace {

bool has_param(ModelKind kind) {
  return kind == ModelKind::Gaussian || kind == ModelKind::TopHat || kind == ModelKind::Dirac;
}

SweepRecord evaluate_point(const SweepConfig& config, double param, int n_bits) {
  SweepRecord rec;
  rec.model = std::string(to_string(config.model.kind));
  if (has_param(config.model.kind)) rec.param = param;
  rec.n_bits = n_bits;

  const auto start = std::chrono::steady_clock::now();
  try {
    const ShiftModel model = config.model.build(param);
    const TransitionColumn col = discretize(model, n_bits, config.scheme);
    rec.c_mu_bits = causal_structure(col, config.causal_tol).c_mu_bits;

    if (config.mode != SweepMode::Asymptotic) rec.h_q_bits = quantum_memory_bits(col);

    if (config.mode != SweepMode::Exact) {
      if (config.model.kind == ModelKind::Gaussian) {
        rec.h_q_asym_bits = entropy_bits(gaussian_asymptotic_spectrum(param, n_bits).lambdas);
      } else if (config.model.kind == ModelKind::TopHat) {
        rec.h_q_asym_bits = entropy_bits(tophat_asymptotic_spectrum(param, n_bits).lambdas);
      }
    }

    if (config.model.kind == ModelKind::Gaussian && param < kGaussianBoundSigmaLimit) {
      rec.bound_bits = gaussian_entropy_bound(param);
    } else if (config.model.kind == ModelKind::TopHat) {
      rec.bound_bits = tophat_entropy_bound(param).exact;
    }
  } catch (const Error& e) {
    rec.c_mu_bits.reset();
    rec.h_q_bits.reset();
    rec.h_q_asym_bits.reset();
    rec.bound_bits.reset();
    rec.error = e.what();
  }
  if (config.record_timing) {
    rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

std::string csv_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

ShiftModel ModelSpec::build(double param) const {
  switch (kind) {
    case ModelKind::Gaussian: return ShiftModel::gaussian(mu, param);
    case ModelKind::TopHat: return ShiftModel::tophat(mu, param);
    case ModelKind::Dirac: return ShiftModel::dirac(param);
    case ModelKind::UniformFull: return ShiftModel::uniform();
    case ModelKind::Tabulated: return ShiftModel::tabulated_from_csv(table);
  }
  throw ParameterError("unknown model kind");
}

SweepMode parse_sweep_mode(const std::string& name) {
  if (name == "exact") return SweepMode::Exact;
  if (name == "asymptotic") return SweepMode::Asymptotic;
  if (name == "both") return SweepMode::Both;
  throw ParameterError("sweep mode must be exact, asymptotic or both; got '" + name + "'");
}

void validate(const SweepConfig& config) {
  if (config.params.empty()) throw ParameterError("sweep needs at least one parameter value");
  if (config.n_bits.empty()) throw ParameterError("sweep needs at least one n_bits value");
  for (std::size_t i = 0; i < config.n_bits.size(); ++i) {
    site_count(config.n_bits[i]);
    if (i > 0 && config.n_bits[i] <= config.n_bits[i - 1])
      throw ParameterError("n_bits grid must be strictly ascending");
  }
  if (!(config.plateau_tol >= 0.0)) throw ParameterError("plateau tolerance must be >= 0");
  if (!(config.causal_tol >= 0.0)) throw ParameterError("causal tolerance must be >= 0");
  for (double p : config.params) config.model.build(p);
}

unsigned sweep_thread_count(unsigned requested, std::size_t work_items) {
  unsigned threads = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CYCLIC_QSIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  const auto items = static_cast<unsigned>(std::min<std::size_t>(work_items, 1u << 20));
  return std::max(1u, std::min(threads, items));
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.params.empty() || config.n_bits.empty()) throw ParameterError("sweep grid is empty");
  for (std::size_t i = 1; i < config.n_bits.size(); ++i) {
    if (config.n_bits[i] <= config.n_bits[i - 1]) throw ParameterError("n_bits grid must be strictly ascending");
  }

  const std::size_t per_param = config.n_bits.size();
  const std::size_t total = config.params.size() * per_param;
  SweepResult result;
  result.records.resize(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      result.records[i] = evaluate_point(config, config.params[i / per_param], config.n_bits[i % per_param]);
    }
  };
  const unsigned threads = sweep_thread_count(config.threads, total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t p = 0; p < config.params.size(); ++p) {
    Plateau plateau;
    if (has_param(config.model.kind)) plateau.param = config.params[p];
    std::optional<double> previous;
    for (std::size_t j = 0; j < per_param; ++j) {
      const SweepRecord& rec = result.records[p * per_param + j];
      const std::optional<double> h = rec.h_q_bits ? rec.h_q_bits : rec.h_q_asym_bits;
      if (h && previous && std::abs(*h - *previous) <= config.plateau_tol) {
        plateau.n_bits = rec.n_bits;
        break;
      }
      previous = h;
    }
    result.plateaus.push_back(plateau);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    out << r.model << ',' << csv_field(r.param) << ',' << r.n_bits << ',' << csv_field(r.c_mu_bits) << ','
        << csv_field(r.h_q_bits) << ',' << csv_field(r.h_q_asym_bits) << ',' << csv_field(r.bound_bits) << ','
        << csv_field(r.wall_time_ms) << ',' << sanitize(r.error) << '\n';
  }
}

void write_sweep_json(std::ostream& out, const std::vector<SweepRecord>& records) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v && std::isfinite(*v)) return *v;
    return nullptr;
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRecord& r : records) {
    nlohmann::ordered_json row;
    row["model"] = r.model;
    row["param"] = opt(r.param);
    row["n_bits"] = r.n_bits;
    row["c_mu_bits"] = opt(r.c_mu_bits);
    row["h_q_bits"] = opt(r.h_q_bits);
    row["h_q_asym_bits"] = opt(r.h_q_asym_bits);
    row["bound_bits"] = opt(r.bound_bits);
    row["wall_time_ms"] = opt(r.wall_time_ms);
    row["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.error);
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace cqsim
