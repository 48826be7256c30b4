#include "cyclic_qsim_cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cyclic_qsim/asymptotics.hpp"
#include "cyclic_qsim/circuit.hpp"
#include "cyclic_qsim/csv_io.hpp"
#include "cyclic_qsim/discretizer.hpp"
#include "cyclic_qsim/errors.hpp"
#include "cyclic_qsim/spectral.hpp"
#include "cyclic_qsim/sweep.hpp"

namespace cqsim::cli {

namespace {

constexpr std::size_t kValidatedSteps = 100000;
constexpr double kMeasuredTvThreshold = 0.01;
constexpr double kDeferredTvThreshold = 0.02;
constexpr std::size_t kDeferredThresholdOutcomes = 64;

struct Options {
  std::string model;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<double> x0;
  double mu = 0.0;
  std::string table;
  std::string n;
  std::size_t steps = kValidatedSteps;
  std::uint64_t seed = 1;
  std::string mode;
  std::string out;
  std::string format = "csv";
  double plateau_tol = 1e-3;
  std::string discretization = "midpoint";
  double tol = kDefaultCausalTolerance;
  bool no_timing = false;
  std::size_t start = 0;
  std::size_t shots = kValidatedSteps;
  bool steps_given = false;
};

// Thrown when a command ran to completion but its checks did not pass; the output is still written.
struct ValidationFailed {
  std::string content;
};

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParameterError("--n: '" + std::string(s) + "' is not an integer");
  return v;
}

// "8", "4,6,8" or "4:13" (inclusive), freely mixed.
std::vector<int> parse_n_list(const std::string& text) {
  if (text.empty()) throw ParameterError("--n is required");
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
               item.end());
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const int lo = parse_int(std::string_view(item).substr(0, colon));
    const int hi = parse_int(std::string_view(item).substr(colon + 1));
    if (hi < lo) throw ParameterError("--n: empty range '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ParameterError("--n is empty");
  for (int v : out) site_count(v);
  return out;
}

int single_n(const Options& o) {
  const auto ns = parse_n_list(o.n);
  if (ns.size() != 1) throw ParameterError("this command takes a single --n value");
  return ns.front();
}

ModelSpec model_spec(const Options& o) {
  if (o.model.empty()) throw ParameterError("--model is required");
  ModelSpec spec;
  spec.kind = parse_model_kind(o.model);
  spec.mu = o.mu;
  if (spec.kind == ModelKind::Tabulated) {
    if (o.table.empty()) throw ParameterError("tabulated model needs --table");
    spec.table = o.table;
  }
  return spec;
}

std::vector<double> model_params(const Options& o, ModelKind kind) {
  const auto require = [](const std::vector<double>& v, const char* flag) {
    if (v.empty()) throw ParameterError(std::string("model needs ") + flag);
    return v;
  };
  switch (kind) {
    case ModelKind::Gaussian: return require(o.sigma, "--sigma");
    case ModelKind::TopHat: return require(o.delta, "--delta");
    case ModelKind::Dirac: return require(o.x0, "--x0");
    default: return {0.0};
  }
}

ShiftModel single_model(const Options& o) {
  const ModelSpec spec = model_spec(o);
  const auto params = model_params(o, spec.kind);
  if (params.size() != 1) throw ParameterError("this command takes a single model parameter");
  return spec.build(params.front());
}

Discretization parse_scheme(const std::string& name) {
  if (name == "midpoint") return Discretization::Midpoint;
  if (name == "averaged") return Discretization::Averaged;
  throw ParameterError("--discretization must be midpoint or averaged");
}

void require_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw ParameterError("--format must be csv or json");
}

// Writes through a sibling temp file so a failure never leaves a partial output.
void emit(const Options& o, const std::string& content, std::ostream& out) {
  if (o.out.empty()) {
    out << content;
    return;
  }
  const std::filesystem::path target(o.out);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.flush()) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, target);
}

std::string cmd_spectrum(const Options& o, std::ostream& err) {
  require_format(o);
  const ShiftModel model = single_model(o);
  const int bits = single_n(o);
  const std::string mode = o.mode.empty() ? "exact" : o.mode;

  std::vector<double> lambdas;
  if (mode == "exact") {
    lambdas = gram_spectrum_dft(discretize(model, bits, parse_scheme(o.discretization))).lambdas();
  } else if (mode == "asymptotic") {
    if (model.kind() == ModelKind::Gaussian) {
      lambdas = gaussian_asymptotic_spectrum(model.param(), bits).positional();
    } else if (model.kind() == ModelKind::TopHat) {
      lambdas = tophat_asymptotic_spectrum(model.param(), bits).positional();
    } else {
      throw CapabilityError("asymptotic spectrum exists only for gaussian and tophat models");
    }
  } else {
    throw ParameterError("spectrum --mode must be exact or asymptotic");
  }

  double trace = 0.0;
  for (double l : lambdas) trace += l;
  err << "h_q_bits=" << format_double(entropy_bits(lambdas)) << " trace=" << format_double(trace) << '\n';

  std::ostringstream buf;
  if (o.format == "csv") {
    write_spectrum_csv(buf, lambdas);
  } else {
    const auto n = static_cast<long long>(lambdas.size());
    auto rows = nlohmann::ordered_json::array();
    for (long long k = -n / 2; k < n / 2; ++k) {
      rows.push_back({{"k", k}, {"lambda", lambdas[static_cast<std::size_t>((k + n) % n)]}});
    }
    buf << rows.dump(2) << '\n';
  }
  return buf.str();
}

std::string cmd_sweep(const Options& o, std::ostream& err) {
  require_format(o);
  SweepConfig config;
  config.model = model_spec(o);
  config.params = model_params(o, config.model.kind);
  config.n_bits = parse_n_list(o.n);
  config.mode = parse_sweep_mode(o.mode.empty() ? "exact" : o.mode);
  config.scheme = parse_scheme(o.discretization);
  config.plateau_tol = o.plateau_tol;
  config.causal_tol = o.tol;
  config.record_timing = !o.no_timing;
  validate(config);

  const SweepResult result = run_sweep(config);
  for (const auto& p : result.plateaus) {
    err << "plateau";
    if (p.param) err << " param=" << format_double(*p.param);
    err << " n_bits=" << (p.n_bits ? std::to_string(*p.n_bits) : std::string("none")) << '\n';
  }

  std::ostringstream buf;
  if (o.format == "csv") {
    write_sweep_csv(buf, result.records);
  } else {
    write_sweep_json(buf, result.records);
  }
  return buf.str();
}

std::string trajectory_header(const ShiftModel& model, std::size_t sites, const Options& o, const std::string& mode) {
  std::ostringstream h;
  h << "# model=" << model.describe() << " N=" << sites << " seed=" << o.seed << " mode=" << mode
    << " start=" << o.start << '\n';
  return h.str();
}

std::string simulate_measured(const Options& o, const ShiftModel& model, const TransitionColumn& col,
                              std::ostream& err) {
  const auto mset = build_memory_states(col);
  const auto u = build_step_unitary(mset);
  const double defect = unitarity_defect(u);
  auto sim = SimulatorState::prepare(mset, o.start, o.seed);

  const std::size_t n = col.size();
  std::ostringstream buf;
  buf << trajectory_header(model, n, o, "measure");
  std::vector<double> increments(n, 0.0);
  std::size_t prev = o.start;
  for (std::size_t t = 0; t < o.steps; ++t) {
    const std::size_t s = step_measured(sim, u);
    buf << s << '\n';
    increments[(s + n - prev) % n] += 1.0;
    prev = s;
  }
  for (double& v : increments) v /= static_cast<double>(std::max<std::size_t>(o.steps, 1));

  const double tv = total_variation(increments, col.probs());
  const bool thresholded = o.steps >= kValidatedSteps;
  const bool pass = defect <= 1e-10 && (!thresholded || tv <= kMeasuredTvThreshold);
  err << "unitarity_defect=" << format_double(defect) << '\n';
  err << "tv_distance=" << format_double(tv) << " steps=" << o.steps << " threshold=" << kMeasuredTvThreshold
      << (thresholded ? "" : " (not applied below 100000 steps)") << '\n';
  err << "validation=" << (pass ? "PASS" : "FAIL") << '\n';
  if (!pass) throw ValidationFailed{buf.str()};
  return buf.str();
}

std::string simulate_deferred(const Options& o, const ShiftModel& model, const TransitionColumn& col,
                              std::ostream& err) {
  const std::size_t tapes = o.steps_given ? o.steps : 2;
  if (tapes == 0) throw ParameterError("deferred mode needs --steps >= 1");
  const auto mset = build_memory_states(col);
  const auto u = build_step_unitary(mset);
  DeferredRegister reg(mset, o.start, tapes);
  for (std::size_t t = 0; t < tapes; ++t) reg.step(u);

  const std::size_t n = col.size();
  const auto exact = reg.tape_distribution();
  const std::size_t outcomes = exact.size();

  // Chain probability of each tape string starting from `start`.
  std::vector<double> chain(outcomes);
  for (std::size_t idx = 0; idx < outcomes; ++idx) {
    double p = 1.0;
    std::size_t rem = idx;
    std::vector<std::size_t> symbols(tapes);
    for (std::size_t t = tapes; t-- > 0;) {
      symbols[t] = rem % n;
      rem /= n;
    }
    std::size_t from = o.start;
    for (std::size_t s : symbols) {
      p *= col.transition(s, from);
      from = s;
    }
    chain[idx] = p;
  }

  std::vector<double> cumulative(outcomes);
  double acc = 0.0;
  for (std::size_t i = 0; i < outcomes; ++i) cumulative[i] = (acc += exact[i]);

  std::ostringstream buf;
  buf << trajectory_header(model, n, o, "defer");
  for (std::size_t t = 0; t < tapes; ++t) buf << (t ? "," : "") << 't' << (t + 1);
  buf << '\n';
  std::mt19937_64 rng(o.seed);
  std::vector<double> hist(outcomes, 0.0);
  std::vector<std::size_t> symbols(tapes);
  for (std::size_t shot = 0; shot < o.shots; ++shot) {
    std::size_t idx = sample_inverse_cdf(cumulative, uniform01(rng));
    hist[idx] += 1.0 / static_cast<double>(o.shots);
    for (std::size_t t = tapes; t-- > 0;) {
      symbols[t] = idx % n;
      idx /= n;
    }
    for (std::size_t t = 0; t < tapes; ++t) buf << (t ? "," : "") << symbols[t];
    buf << '\n';
  }

  const double exact_tv = total_variation(exact, chain);
  const double shot_tv = o.shots ? total_variation(hist, chain) : 0.0;
  const bool thresholded = o.shots >= kValidatedSteps && outcomes <= kDeferredThresholdOutcomes;
  const bool pass = exact_tv <= 1e-10 && (!thresholded || shot_tv <= kDeferredTvThreshold);
  err << "unitarity_defect=" << format_double(unitarity_defect(u)) << '\n';
  err << "exact_tv_distance=" << format_double(exact_tv) << " threshold=1e-10\n";
  err << "shot_tv_distance=" << format_double(shot_tv) << " shots=" << o.shots << " outcomes=" << outcomes
      << " threshold=" << kDeferredTvThreshold << (thresholded ? "" : " (not applied)") << '\n';
  err << "validation=" << (pass ? "PASS" : "FAIL") << '\n';
  if (!pass) throw ValidationFailed{buf.str()};
  return buf.str();
}

std::string cmd_simulate(const Options& o, std::ostream& err) {
  const ShiftModel model = single_model(o);
  const int bits = single_n(o);
  const std::string mode = o.mode.empty() ? "measure" : o.mode;
  if (mode != "measure" && mode != "defer") throw ParameterError("simulate --mode must be measure or defer");
  const TransitionColumn col = discretize(model, bits, parse_scheme(o.discretization));
  if (col.size() > kCircuitMaxSites) {
    throw CapabilityError("circuit simulation is limited to " + std::to_string(kCircuitMaxSites) + " sites");
  }
  if (o.start >= col.size()) throw ParameterError("--start must be below N");
  return mode == "measure" ? simulate_measured(o, model, col, err) : simulate_deferred(o, model, col, err);
}

// Built-in golden checks with fixed inputs; independent of --seed.
std::string cmd_validate(std::ostream& err) {
  std::ostringstream buf;
  bool all = true;
  const auto report = [&](const std::string& name, bool ok, double worst) {
    buf << (ok ? "PASS " : "FAIL ") << name << " worst=" << format_double(worst) << '\n';
    all = all && ok;
  };

  for (int bits = 2; bits <= 10; ++bits) {
    const auto col = discretize(ShiftModel::dirac(0.25), bits);
    const auto spec = gram_spectrum_dft(col);
    const double inv_n = 1.0 / static_cast<double>(col.size());
    double worst = 0.0;
    for (double l : spec.lambdas()) worst = std::max(worst, std::abs(l - inv_n));
    const double h_err = std::abs(von_neumann_entropy(spec) - bits);
    report("delta n=" + std::to_string(bits), worst <= 1e-10 && h_err <= 1e-9, std::max(worst, h_err));
  }

  for (int bits = 2; bits <= 10; ++bits) {
    const auto spec = gram_spectrum_dft(discretize(ShiftModel::uniform(), bits));
    double worst = std::abs(spec.lambdas()[0] - 1.0);
    for (std::size_t k = 1; k < spec.size(); ++k) worst = std::max(worst, spec.lambdas()[k]);
    const double h = von_neumann_entropy(spec);
    report("uniform n=" + std::to_string(bits), worst <= 1e-10 && h <= 1e-9, std::max(worst, h));
  }

  std::mt19937_64 rng(20240601);
  std::exponential_distribution<double> expo(1.0);
  for (int bits : {3, 5, 7}) {
    const std::size_t n = std::size_t{1} << bits;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> p(n);
      double total = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        p[k] = (trial % 4 == 3 && k % 3 != 0) ? 0.0 : expo(rng);
        total += p[k];
      }
      for (double& v : p) v /= total;
      const TransitionColumn col(bits, p);
      auto dft = gram_spectrum_dft(col).lambdas();
      auto dense = dense_oracle_spectrum(col).lambdas();
      std::sort(dft.begin(), dft.end());
      std::sort(dense.begin(), dense.end());
      for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(dft[k] - dense[k]));
    }
    report("oracle N=" + std::to_string(n), worst <= 1e-8, worst);
  }

  {
    const auto col = discretize(ShiftModel::gaussian(0.0, 0.05), 3);
    const auto mset = build_memory_states(col);
    const double defect = unitarity_defect(build_step_unitary(mset));
    report("circuit unitarity N=8", defect <= 1e-10, defect);
    const double gap = std::abs(stationary_density_entropy(mset) - quantum_memory_bits(col));
    report("circuit density entropy N=8", gap <= 1e-8, gap);
  }

  err << "validate: " << (all ? "all checks passed" : "FAILURES present") << '\n';
  if (!all) throw ValidationFailed{buf.str()};
  return buf.str();
}

void add_options(CLI::App& app, Options& o) {
  app.add_option("--model", o.model, "gaussian, tophat, dirac, uniform or tabulated")
      ->check(CLI::IsMember({"gaussian", "tophat", "dirac", "uniform", "tabulated"}));
  app.add_option("--sigma", o.sigma, "Gaussian width (comma list for sweeps)")->delimiter(',');
  app.add_option("--delta", o.delta, "top-hat half width (comma list for sweeps)")->delimiter(',');
  app.add_option("--x0", o.x0, "Dirac shift (comma list for sweeps)")->delimiter(',');
  app.add_option("--mu", o.mu, "mean shift of gaussian/tophat");
  app.add_option("--table", o.table, "CSV of position,density knots for the tabulated model");
  app.add_option("--n", o.n, "precision in bits: 8, 4,6,8 or 4:13");
  app.add_option("--steps", o.steps, "simulated steps (measure) or tapes (defer)");
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--mode", o.mode, "spectrum: exact|asymptotic; sweep: exact|asymptotic|both; simulate: measure|defer");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--plateau-tol", o.plateau_tol, "plateau tolerance in bits");
  app.add_option("--discretization", o.discretization, "midpoint or averaged")
      ->check(CLI::IsMember({"midpoint", "averaged"}));
  app.add_option("--tol", o.tol, "causal-state equality tolerance");
  app.add_flag("--no-timing", o.no_timing, "leave wall_time_ms empty so reruns are byte-identical");
  app.add_option("--start", o.start, "start site for simulation");
  app.add_option("--shots", o.shots, "deferred-mode measurement shots");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory costs of classical and quantum simulators of cyclic random walks"};
  app.name("cyclic_qsim");
  app.set_config("--config", "", "flat key = value file mirroring the flags; flags take precedence");
  app.require_subcommand(1, 1);

  Options o;
  add_options(app, o);
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the stationary memory ensemble as k,lambda");
  auto* sweep = app.add_subcommand("sweep", "C_mu and H_Q over a parameter x precision grid");
  auto* simulate = app.add_subcommand("simulate", "run the quantum step circuit and check it against the chain");
  auto* validate_cmd = app.add_subcommand("validate", "run the built-in golden checks");
  for (auto* sub : {spectrum, sweep, simulate, validate_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParameter;
  }
  o.steps_given = app.count("--steps") > 0;

  try {
    std::string content;
    if (spectrum->parsed()) {
      content = cmd_spectrum(o, err);
    } else if (sweep->parsed()) {
      content = cmd_sweep(o, err);
    } else if (simulate->parsed()) {
      content = cmd_simulate(o, err);
    } else {
      content = cmd_validate(err);
    }
    emit(o, content, out);
    return kExitOk;
  } catch (const ValidationFailed& failed) {
    try {
      emit(o, failed.content, out);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
    }
    return kExitValidation;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace cqsim::cli
