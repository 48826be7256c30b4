#include "cyclic_qsim/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <string>

#include "cyclic_qsim/csv_io.hpp"
#include "cyclic_qsim/errors.hpp"
#include "cyclic_qsim/fft.hpp"

namespace cqsim {

namespace {

std::vector<double> sqrt_column(const TransitionColumn& col) {
  std::vector<double> amp(col.size());
  std::transform(col.probs().begin(), col.probs().end(), amp.begin(), [](double p) { return std::sqrt(p); });
  return amp;
}

}  // namespace

std::string_view to_string(SpectrumMethod method) {
  switch (method) {
    case SpectrumMethod::DftExact: return "dft_exact";
    case SpectrumMethod::DenseOracle: return "dense_oracle";
    case SpectrumMethod::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

Spectrum::Spectrum(std::vector<double> lambdas, SpectrumMethod method, int n_bits)
    : lambdas_(std::move(lambdas)), method_(method), n_bits_(n_bits) {
  for (double& l : lambdas_) {
    if (!std::isfinite(l)) throw NumericalError("non-finite eigenvalue");
    if (l < -kNegativeEigenvalueTolerance) {
      throw NumericalError("eigenvalue " + format_double(l) + " is negative beyond rounding noise");
    }
    if (l < 0.0) l = 0.0;
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw NumericalError("spectrum trace " + format_double(tr) + " differs from 1");
  }
}

double Spectrum::trace() const {
  double sum = 0.0;
  for (double l : lambdas_) sum += l;
  return sum;
}

Spectrum gram_spectrum_dft(const TransitionColumn& col) {
  const std::size_t n = col.size();
  const auto forward = fft_real(sqrt_column(col));
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> lambdas(n);
  for (std::size_t k = 0; k < n; ++k) {
    // The reflected sequence q_j = sqrt p_{(N-j) mod N} transforms to forward[(N-k) mod N].
    const std::complex<double> reflected = forward[(n - k) % n];
    const std::complex<double> product = forward[k] * reflected * inv_n;
    if (std::abs(product.imag()) > 1e-9) {
      throw NumericalError("imaginary residue " + format_double(product.imag()) + " in DFT eigenvalue");
    }
    lambdas[k] = product.real();
  }
  return Spectrum(std::move(lambdas), SpectrumMethod::DftExact, col.n_bits());
}

Spectrum dense_oracle_spectrum(const TransitionColumn& col) {
  const std::size_t n = col.size();
  if (n > kDenseOracleMaxSites) {
    throw CapabilityError("dense oracle limited to " + std::to_string(kDenseOracleMaxSites) + " sites, got " +
                          std::to_string(n));
  }
  const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };

  // Column b of `amps` is |S_b>: amplitudes sqrt(p_{c b}) over c.
  Eigen::MatrixXd amps(idx(n), idx(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t b = 0; b < n; ++b) amps(idx(c), idx(b)) = std::sqrt(col.transition(c, b));

  Eigen::MatrixXd gram = (amps.transpose() * amps) / static_cast<double>(n);
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return Spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()), SpectrumMethod::DenseOracle,
                  col.n_bits());
}

std::vector<double> overlap_row(const TransitionColumn& col) {
  auto spectrum = fft_real(sqrt_column(col));
  for (auto& v : spectrum) v = std::norm(v);
  fft_inplace(spectrum, FftDirection::Inverse);
  std::vector<double> out(col.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = spectrum[j].real();
  return out;
}

double entropy_bits(std::span<const double> lambdas) {
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  std::sort(sorted.begin(), sorted.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  double h = 0.0;
  for (double l : sorted) {
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h > 0.0 ? h : 0.0;
}

double von_neumann_entropy(const Spectrum& spectrum) { return entropy_bits(spectrum.lambdas()); }

double quantum_memory_bits(const TransitionColumn& col) { return von_neumann_entropy(gram_spectrum_dft(col)); }

void write_spectrum_csv(std::ostream& out, std::span<const double> positional_lambdas) {
  const auto n = static_cast<long long>(positional_lambdas.size());
  out << "k,lambda\n";
  for (long long k = -n / 2; k < n - n / 2; ++k) {
    const auto pos = static_cast<std::size_t>((k % n + n) % n);
    out << k << ',' << format_double(positional_lambdas[pos]) << '\n';
  }
}

}  // namespace cqsim
