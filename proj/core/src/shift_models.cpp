#include "cyclic_qsim/shift_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cyclic_qsim/csv_io.hpp"
#include "cyclic_qsim/errors.hpp"

namespace cqsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double frac(double x) { return x - std::floor(x); }

// Distance from x to the nearest integer translate of `center`, in [-1/2, 1/2].
double wrap_offset(double x, double center) {
  const double d = x - center;
  return d - std::round(d);
}

// Mass of N(0, sigma^2) over [lo, hi), evaluated on the tail that keeps erfc accurate.
double normal_mass(double lo, double hi, double sigma) {
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double z1 = lo / sigma * inv_sqrt2;
  const double z2 = hi / sigma * inv_sqrt2;
  if (z1 >= 0.0) return 0.5 * (std::erfc(z1) - std::erfc(z2));
  if (z2 <= 0.0) return 0.5 * (std::erfc(-z2) - std::erfc(-z1));
  return 1.0 - 0.5 * std::erfc(-z1) - 0.5 * std::erfc(z2);
}

double gaussian_mass(const GaussianShift& g, double a, double b, int windings) {
  // Recentre so the interval midpoint sits within half a period of mu.
  const double shift = g.mu + std::round(0.5 * (a + b) - g.mu);
  const double lo = a - shift;
  const double hi = b - shift;
  double total = 0.0;
  // Far images first so the dominant term is added last.
  for (int m = windings; m >= 1; --m) {
    total += normal_mass(lo + m, hi + m, g.sigma);
    total += normal_mass(lo - m, hi - m, g.sigma);
  }
  total += normal_mass(lo, hi, g.sigma);
  return std::clamp(total, 0.0, 1.0);
}

double tophat_mass(const TopHatShift& t, double a, double b) {
  const double shift = t.mu + std::round(0.5 * (a + b) - t.mu);
  const double lo = a - shift;
  const double hi = b - shift;
  double overlap = 0.0;
  for (int m = -2; m <= 2; ++m) {
    const double l = std::max(lo + m, -t.delta);
    const double h = std::min(hi + m, t.delta);
    if (h > l) overlap += h - l;
  }
  return std::clamp(overlap / (2.0 * t.delta), 0.0, 1.0);
}

double dirac_mass(const DiracShift& d, double a, double b) {
  // Largest translate of x0 not exceeding b; since b - a <= 1 it is the only candidate for (a, b].
  const double pos = d.x0 + std::floor(b - d.x0);
  return pos > a ? 1.0 : 0.0;
}

// Position of knot i in the unrolled period [x0, x0 + 1].
double knot_pos(const TabulatedShift& t, std::size_t i) {
  return i < t.knots.size() ? t.knots[i].position : t.knots.front().position + 1.0;
}
double knot_density(const TabulatedShift& t, std::size_t i) {
  return t.knots[i % t.knots.size()].density;
}

// Segment index containing s in [x0, x0 + 1).
std::size_t tabulated_segment(const TabulatedShift& t, double s) {
  auto it = std::upper_bound(t.knots.begin(), t.knots.end(), s,
                             [](double v, const Knot& k) { return v < k.position; });
  return static_cast<std::size_t>(std::distance(t.knots.begin(), it)) - 1;
}

double tabulated_density_unrolled(const TabulatedShift& t, double s) {
  const std::size_t i = tabulated_segment(t, s);
  const double x_lo = knot_pos(t, i);
  const double x_hi = knot_pos(t, i + 1);
  const double w = (s - x_lo) / (x_hi - x_lo);
  return knot_density(t, i) + (knot_density(t, i + 1) - knot_density(t, i)) * w;
}

// Periodic cumulative mass relative to the first knot: grows by 1 per period.
double tabulated_cdf(const TabulatedShift& t, double x) {
  const double x0 = t.knots.front().position;
  const double rel = x - x0;
  const double periods = std::floor(rel);
  double s = x0 + (rel - periods);
  if (s >= x0 + 1.0) s = x0;  // rounding at the seam
  const std::size_t i = tabulated_segment(t, s);
  const double x_lo = knot_pos(t, i);
  const double len = s - x_lo;
  const double d_s = tabulated_density_unrolled(t, s);
  return periods + t.cumulative[i] + 0.5 * len * (knot_density(t, i) + d_s);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Gaussian: return "gaussian";
    case ModelKind::TopHat: return "tophat";
    case ModelKind::Dirac: return "dirac";
    case ModelKind::UniformFull: return "uniform";
    case ModelKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "gaussian") return ModelKind::Gaussian;
  if (name == "tophat") return ModelKind::TopHat;
  if (name == "dirac") return ModelKind::Dirac;
  if (name == "uniform") return ModelKind::UniformFull;
  if (name == "tabulated") return ModelKind::Tabulated;
  throw ParameterError("unknown model '" + std::string(name) + "'");
}

ShiftModel ShiftModel::gaussian(double mu, double sigma, double sigma_cap) {
  require_finite(mu, "mu");
  require_finite(sigma, "sigma");
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be > 0");
  if (sigma > sigma_cap) {
    std::ostringstream os;
    os << "gaussian sigma " << sigma << " exceeds cap " << sigma_cap;
    throw ParameterError(os.str());
  }
  return ShiftModel(GaussianShift{mu, sigma});
}

ShiftModel ShiftModel::tophat(double mu, double delta) {
  require_finite(mu, "mu");
  require_finite(delta, "delta");
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("tophat delta must lie in (0, 1/2)");
  return ShiftModel(TopHatShift{mu, delta});
}

ShiftModel ShiftModel::dirac(double x0) {
  require_finite(x0, "x0");
  if (!(x0 >= 0.0 && x0 < 1.0)) throw ParameterError("dirac x0 must lie in [0, 1)");
  return ShiftModel(DiracShift{x0});
}

ShiftModel ShiftModel::uniform() { return ShiftModel(UniformShift{}); }

ShiftModel ShiftModel::tabulated(std::vector<Knot> knots) {
  if (knots.empty()) throw ParameterError("tabulated model needs at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Knot& k = knots[i];
    require_finite(k.position, "knot position");
    require_finite(k.density, "knot density");
    if (k.position < 0.0 || k.position >= 1.0) throw ParameterError("knot positions must lie in [0, 1)");
    if (k.density < 0.0) throw ParameterError("knot densities must be >= 0");
    if (i > 0 && !(k.position > knots[i - 1].position))
      throw ParameterError("knot positions must be strictly increasing");
  }

  TabulatedShift t{std::move(knots), {}};
  const std::size_t n = t.knots.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += 0.5 * (knot_pos(t, i + 1) - knot_pos(t, i)) * (knot_density(t, i) + knot_density(t, i + 1));
  }
  if (!(total > 0.0)) throw ParameterError("tabulated density has zero mass");
  for (Knot& k : t.knots) k.density /= total;

  t.cumulative.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    t.cumulative[i + 1] = t.cumulative[i] + 0.5 * (knot_pos(t, i + 1) - knot_pos(t, i)) *
                                                (knot_density(t, i) + knot_density(t, i + 1));
  }
  return ShiftModel(std::move(t));
}

ShiftModel ShiftModel::tabulated_from_csv(const std::filesystem::path& path) {
  const auto rows = read_numeric_table(path, 2);
  std::vector<Knot> knots;
  knots.reserve(rows.size());
  for (const auto& r : rows) knots.push_back({r[0], r[1]});
  return tabulated(std::move(knots));
}

ModelKind ShiftModel::kind() const noexcept {
  return std::visit(overloaded{
                        [](const GaussianShift&) { return ModelKind::Gaussian; },
                        [](const TopHatShift&) { return ModelKind::TopHat; },
                        [](const DiracShift&) { return ModelKind::Dirac; },
                        [](const UniformShift&) { return ModelKind::UniformFull; },
                        [](const TabulatedShift&) { return ModelKind::Tabulated; },
                    },
                    model_);
}

double ShiftModel::param() const noexcept {
  return std::visit(overloaded{
                        [](const GaussianShift& g) { return g.sigma; },
                        [](const TopHatShift& t) { return t.delta; },
                        [](const DiracShift& d) { return d.x0; },
                        [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); },
                    },
                    model_);
}

std::string ShiftModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const GaussianShift& g) { os << "gaussian(mu=" << g.mu << ",sigma=" << g.sigma << ")"; },
                 [&](const TopHatShift& t) { os << "tophat(mu=" << t.mu << ",delta=" << t.delta << ")"; },
                 [&](const DiracShift& d) { os << "dirac(x0=" << d.x0 << ")"; },
                 [&](const UniformShift&) { os << "uniform"; },
                 [&](const TabulatedShift& t) { os << "tabulated(knots=" << t.knots.size() << ")"; },
             },
             model_);
  return os.str();
}

double interval_probability(const ShiftModel& model, double a, double b, int windings) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("interval endpoints must be finite");
  if (!(a < b)) throw ParameterError("interval requires a < b");
  if (b - a > 1.0 + 1e-12) throw ParameterError("interval wider than one period");
  if (windings < 0) throw ParameterError("winding count must be >= 0");

  return std::visit(overloaded{
                        [&](const GaussianShift& g) { return gaussian_mass(g, a, b, windings); },
                        [&](const TopHatShift& t) { return tophat_mass(t, a, b); },
                        [&](const DiracShift& d) { return dirac_mass(d, a, b); },
                        [&](const UniformShift&) { return b - a; },
                        [&](const TabulatedShift& t) {
                          return std::clamp(tabulated_cdf(t, b) - tabulated_cdf(t, a), 0.0, 1.0);
                        },
                    },
                    model.variant());
}

double interval_probability(const ShiftModel& model, double a, double b) {
  return interval_probability(model, a, b, kDefaultWindings);
}

double density(const ShiftModel& model, double x) {
  if (!std::isfinite(x)) throw ParameterError("density argument must be finite");
  return std::visit(
      overloaded{
          [&](const GaussianShift& g) {
            const double d = wrap_offset(x, g.mu);
            const double norm = 1.0 / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
            double total = 0.0;
            for (int m = kDefaultWindings; m >= 1; --m) {
              const double zp = (d + m) / g.sigma;
              const double zm = (d - m) / g.sigma;
              total += std::exp(-0.5 * zp * zp) + std::exp(-0.5 * zm * zm);
            }
            total += std::exp(-0.5 * (d / g.sigma) * (d / g.sigma));
            return norm * total;
          },
          [&](const TopHatShift& t) {
            return std::abs(wrap_offset(x, t.mu)) <= t.delta ? 1.0 / (2.0 * t.delta) : 0.0;
          },
          [&](const DiracShift&) -> double {
            throw CapabilityError("dirac shift has no pointwise density");
          },
          [&](const UniformShift&) { return 1.0; },
          [&](const TabulatedShift& t) {
            const double x0 = t.knots.front().position;
            double s = x0 + frac(x - x0);
            if (s >= x0 + 1.0) s = x0;
            return tabulated_density_unrolled(t, s);
          },
      },
      model.variant());
}

std::vector<double> density_breakpoints(const ShiftModel& model) {
  return std::visit(overloaded{
                        [](const TopHatShift& t) {
                          return std::vector<double>{frac(t.mu - t.delta), frac(t.mu + t.delta)};
                        },
                        [](const DiracShift& d) { return std::vector<double>{d.x0}; },
                        [](const TabulatedShift& t) {
                          std::vector<double> out;
                          for (const Knot& k : t.knots) out.push_back(k.position);
                          return out;
                        },
                        [](const auto&) { return std::vector<double>{}; },
                    },
                    model.variant());
}

}  // namespace cqsim
