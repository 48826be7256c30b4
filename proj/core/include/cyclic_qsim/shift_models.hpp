#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cqsim {

enum class ModelKind { Gaussian, TopHat, Dirac, UniformFull, Tabulated };

std::string_view to_string(ModelKind kind);
/// Parses the CLI spelling ("gaussian", "tophat", "dirac", "uniform", "tabulated").
ModelKind parse_model_kind(std::string_view name);

inline constexpr double kDefaultSigmaCap = 0.15;
/// Winding images m in [-kWindings, kWindings] are summed for the wrapped Gaussian.
inline constexpr int kDefaultWindings = 3;

struct GaussianShift {
  double mu;
  double sigma;
};

struct TopHatShift {
  double mu;
  double delta;  ///< half-width, 0 < delta < 1/2
};

struct DiracShift {
  double x0;  ///< in [0, 1)
};

struct UniformShift {};

struct Knot {
  double position;
  double density;
};

/// Periodic piecewise-linear density through the knots, normalized to unit mass.
struct TabulatedShift {
  std::vector<Knot> knots;
  /// cumulative[i] = mass from knots[0].position up to knots[i].position.
  std::vector<double> cumulative;
};

/// Probability density of the per-step displacement on the unit circle.
///
/// Values are immutable once constructed; all factories validate their
/// arguments and throw ParameterError on failure.
class ShiftModel {
 public:
  using Variant = std::variant<GaussianShift, TopHatShift, DiracShift, UniformShift, TabulatedShift>;

  static ShiftModel gaussian(double mu, double sigma, double sigma_cap = kDefaultSigmaCap);
  static ShiftModel tophat(double mu, double delta);
  static ShiftModel dirac(double x0);
  static ShiftModel uniform();
  /// Knots need strictly increasing positions in [0, 1) and nonnegative densities with positive total mass.
  static ShiftModel tabulated(std::vector<Knot> knots);
  static ShiftModel tabulated_from_csv(const std::filesystem::path& path);

  ModelKind kind() const noexcept;
  const Variant& variant() const noexcept { return model_; }

  /// The scalar parameter the sweep harness varies (sigma, delta or x0); NaN otherwise.
  double param() const noexcept;
  std::string describe() const;

 private:
  explicit ShiftModel(Variant v) : model_(std::move(v)) {}
  Variant model_;
};

/// Mass of the 1-periodic extension of the density over [a, b).
///
/// Requires a < b and b - a <= 1. A Dirac mass is tested against (a, b]
/// instead, so a point exactly between two discretization cells belongs to
/// the lower-index cell.
double interval_probability(const ShiftModel& model, double a, double b);

/// Same as interval_probability but with an explicit winding count for the Gaussian.
double interval_probability(const ShiftModel& model, double a, double b, int windings);

/// Pointwise value of the periodic density. Throws CapabilityError for Dirac.
double density(const ShiftModel& model, double x);

/// Positions in [0, 1) where the density is not smooth (edges, knots). Empty for Gaussian/uniform.
std::vector<double> density_breakpoints(const ShiftModel& model);

}  // namespace cqsim
