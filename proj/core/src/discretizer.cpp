#include "cyclic_qsim/discretizer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <variant>

#include "cyclic_qsim/csv_io.hpp"
#include "cyclic_qsim/errors.hpp"

namespace cqsim {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]; exact for polynomials up to degree 15.
constexpr std::array<double, 4> kGLNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                            0.9602898564975363};
constexpr std::array<double, 4> kGLWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGLNodes.size(); ++i) {
    sum += kGLWeights[i] * (f(mid - half * kGLNodes[i]) + f(mid + half * kGLNodes[i]));
  }
  return sum * half;
}

double wrap_offset(double x, double center) {
  const double d = x - center;
  return d - std::round(d);
}

// Integral of the density against the hat (1 - N|x - c|)_+ of half-width w = 1/N.
// Equivalent to the cell-averaged source position.
double hat_weighted_mass(const ShiftModel& model, double c, double w) {
  if (const auto* d = std::get_if<DiracShift>(&model.variant())) {
    return std::max(0.0, 1.0 - std::abs(wrap_offset(d->x0, c)) / w);
  }
  if (std::holds_alternative<UniformShift>(model.variant())) return w;

  std::vector<double> cuts = {c - w, c, c + w};
  for (double bp : density_breakpoints(model)) {
    for (int m = -2; m <= 2; ++m) {
      const double x = bp + m;
      if (x > c - w && x < c + w) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  const auto* g = std::get_if<GaussianShift>(&model.variant());
  const auto integrand = [&](double x) { return density(model, x) * (1.0 - std::abs(x - c) / w); };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    if (g == nullptr) {
      total += gauss_legendre(integrand, lo, hi);
      continue;
    }
    // Smooth but possibly narrow: panels no wider than sigma/4, skipping the far tails.
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.25 * g->sigma))));
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double pl = lo + p * step;
      const double ph = (p + 1 == panels) ? hi : pl + step;
      const double centre_gap = std::abs(wrap_offset(0.5 * (pl + ph), g->mu)) - 0.5 * step;
      if (centre_gap > 40.0 * g->sigma) continue;
      total += gauss_legendre(integrand, pl, ph);
    }
  }
  return total;
}

}  // namespace

TransitionColumn::TransitionColumn(int n_bits, std::vector<double> probs) : n_bits_(n_bits), probs_(std::move(probs)) {
  if (probs_.size() != site_count(n_bits_)) {
    throw ParameterError("transition column length " + std::to_string(probs_.size()) + " does not match 2^" +
                         std::to_string(n_bits_));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw ParameterError("transition probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw ParameterError("transition column sums to " + format_double(sum) + ", expected 1");
  }
}

std::size_t site_count(int n_bits) {
  if (n_bits < 1 || n_bits > kMaxBits) {
    throw ParameterError("n_bits must lie in [1, " + std::to_string(kMaxBits) + "], got " + std::to_string(n_bits));
  }
  return std::size_t{1} << n_bits;
}

TransitionColumn discretize(const ShiftModel& model, int n_bits, Discretization scheme) {
  const std::size_t n = site_count(n_bits);
  const double cell = 1.0 / static_cast<double>(n);
  std::vector<double> probs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double centre = static_cast<double>(k) * cell;
    if (scheme == Discretization::Midpoint) {
      probs[k] = interval_probability(model, centre - 0.5 * cell, centre + 0.5 * cell);
    } else {
      probs[k] = hat_weighted_mass(model, centre, cell);
    }
  }
  return TransitionColumn(n_bits, std::move(probs));
}

CausalStructure causal_structure(const TransitionColumn& col, double tol) {
  if (!(tol >= 0.0)) throw ParameterError("causal tolerance must be >= 0");
  const auto& p = col.probs();
  const std::size_t n = p.size();
  for (std::size_t period = 1; period < n; period <<= 1) {
    bool invariant = true;
    for (std::size_t k = 0; k < n && invariant; ++k) {
      invariant = std::abs(p[k] - p[(k + period) % n]) <= tol;
    }
    if (invariant) return {period, std::log2(static_cast<double>(period))};
  }
  return {n, static_cast<double>(col.n_bits())};
}

std::size_t sample_inverse_cdf(const std::vector<double>& cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) {
    // u landed in the rounding gap above the final cumulative value: take the last outcome with mass.
    std::size_t k = cumulative.size() - 1;
    while (k > 0 && cumulative[k] == cumulative[k - 1]) --k;
    return k;
  }
  return static_cast<std::size_t>(std::distance(cumulative.begin(), it));
}

std::vector<std::size_t> sample_classical_trajectory(const TransitionColumn& col, std::size_t start,
                                                     std::size_t steps, std::uint64_t seed) {
  const std::size_t n = col.size();
  if (start >= n) throw ParameterError("start site " + std::to_string(start) + " out of range");

  std::vector<double> cumulative(n);
  std::partial_sum(col.probs().begin(), col.probs().end(), cumulative.begin());

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  out.reserve(steps);
  std::size_t site = start;
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t jump = sample_inverse_cdf(cumulative, uniform01(rng));
    site = (site + jump) % n;
    out.push_back(site);
  }
  return out;
}

std::vector<double> apply_transition(const TransitionColumn& col, const std::vector<double>& dist) {
  const std::size_t n = col.size();
  if (dist.size() != n) throw ParameterError("distribution length does not match column");
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += col.transition(k, j) * dist[j];
    out[k] = acc;
  }
  return out;
}

void write_column_csv(std::ostream& out, const TransitionColumn& col) {
  out << "index,probability\n";
  for (std::size_t k = 0; k < col.size(); ++k) out << k << ',' << format_double(col[k]) << '\n';
}

TransitionColumn read_column_csv(std::istream& in) {
  const auto rows = read_numeric_table(in, 2);
  if (rows.empty() || !std::has_single_bit(rows.size())) {
    throw ParameterError("column CSV needs a power-of-two number of rows");
  }
  std::vector<double> probs(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][0] != static_cast<double>(k)) throw ParameterError("column CSV indices must be 0, 1, ..., N-1");
    probs[k] = rows[k][1];
  }
  const int bits = std::countr_zero(rows.size());
  return TransitionColumn(bits, std::move(probs));
}

TransitionColumn read_column_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path.string());
  return read_column_csv(in);
}

}  // namespace cqsim
