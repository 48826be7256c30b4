#include "cyclic_qsim/asymptotics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <variant>

#include "cyclic_qsim/discretizer.hpp"
#include "cyclic_qsim/errors.hpp"

namespace cqsim {

namespace {

constexpr double kGaussianSigmaMax = 0.15;

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma <= kGaussianSigmaMax)) throw ParameterError("sigma must lie in (0, 0.15]");
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("delta must lie in (0, 1/2)");
}

template <class F>
AsymptoticSpectrum sample_spectrum(ModelKind kind, double param, int n_bits, F&& eigenvalue) {
  const std::size_t n = site_count(n_bits);
  AsymptoticSpectrum out{kind, param, n_bits, std::vector<double>(n)};
  const long long k_min = -static_cast<long long>(n / 2);
  for (std::size_t i = 0; i < n; ++i) out.lambdas[i] = eigenvalue(static_cast<double>(k_min + static_cast<long long>(i)));
  return out;
}

// Composite 8-point Gauss-Legendre over [lo, hi] with the given panel count.
template <class F>
double integrate(F&& f, double lo, double hi, int panels) {
  static constexpr std::array<double, 4> nodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                  0.9602898564975363};
  static constexpr std::array<double, 4> weights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                    0.1012285362903763};
  const double step = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * step;
    const double half = 0.5 * step;
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * (f(mid - half * nodes[i]) + f(mid + half * nodes[i]));
    total += s * half;
  }
  return total;
}

}  // namespace

double AsymptoticSpectrum::sum() const {
  double s = 0.0;
  for (double l : lambdas) s += l;
  return s;
}

std::vector<double> AsymptoticSpectrum::positional() const {
  const std::size_t n = lambdas.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[(i + n - n / 2) % n] = lambdas[i];
  return out;
}

double gaussian_asymptotic_eigenvalue(double sigma, double k) {
  // Normal density with standard deviation 1/(4 pi sigma): A exp(-B k^2).
  const double amplitude = 2.0 * std::sqrt(2.0 * std::numbers::pi) * sigma;
  const double rate = 8.0 * std::numbers::pi * std::numbers::pi * sigma * sigma;
  return amplitude * std::exp(-rate * k * k);
}

AsymptoticSpectrum gaussian_asymptotic_spectrum(double sigma, int n_bits) {
  check_sigma(sigma);
  return sample_spectrum(ModelKind::Gaussian, sigma, n_bits,
                         [&](double k) { return gaussian_asymptotic_eigenvalue(sigma, k); });
}

double normalized_sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double tophat_asymptotic_eigenvalue(double delta, double k) {
  const double s = normalized_sinc(2.0 * k * delta);
  return 2.0 * delta * s * s;
}

AsymptoticSpectrum tophat_asymptotic_spectrum(double delta, int n_bits) {
  check_delta(delta);
  return sample_spectrum(ModelKind::TopHat, delta, n_bits,
                         [&](double k) { return tophat_asymptotic_eigenvalue(delta, k); });
}

double gaussian_entropy_bound(double sigma) {
  if (!(sigma > 0.0 && sigma < kGaussianBoundSigmaLimit)) {
    throw ParameterError("gaussian entropy bound requires 0 < sigma < 0.073");
  }
  const double a = 2.0 * std::sqrt(2.0 * std::numbers::pi) * sigma;
  return 1.0 / (2.0 * std::numbers::ln2) - (1.0 + 2.0 * a) * std::log2(a);
}

TopHatBound tophat_entropy_bound(double delta) {
  check_delta(delta);
  const double e = std::numbers::e;
  const double ln2 = std::numbers::ln2;
  const double root = std::sqrt(2.0 * delta);
  const double exact = 8.0 / (std::numbers::pi * ln2 * root) * std::exp((1.0 - e) / (2.0 * e)) +
                       4.0 / ln2 * std::exp((1.0 - e) / e);
  const double rounded = 1.894 / std::sqrt(delta) + 3.067;
  return {exact, rounded};
}

double asymptotic_gram_function(const ShiftModel& model, double y) {
  if (!(y >= -0.5 && y < 0.5)) throw ParameterError("y must lie in [-1/2, 1/2)");

  if (const auto* t = std::get_if<TopHatShift>(&model.variant())) {
    // Overlap length of two arcs of length 2 delta whose centres are |y| apart on the unit circle.
    const double width = 2.0 * t->delta;
    const double gap = std::abs(y);
    const double overlap = std::max(0.0, width - gap) + std::max(0.0, width - (1.0 - gap));
    return overlap / width;
  }
  if (const auto* g = std::get_if<GaussianShift>(&model.variant())) {
    const int panels = static_cast<int>(std::ceil(4.0 / g->sigma));
    const auto integrand = [&](double x) { return std::sqrt(density(model, x) * density(model, x - y)); };
    return integrate(integrand, g->mu - 0.5, g->mu + 0.5, panels);
  }
  throw CapabilityError("asymptotic Gram function is defined for gaussian and tophat models only");
}

}  // namespace cqsim
