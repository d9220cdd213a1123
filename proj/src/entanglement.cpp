#include "qfilter/entanglement.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qfilter {

namespace {

constexpr double kEigenTol = 1e-8;

const Mat4& yy() {
  static const Mat4 m = pauli_product(2, 2);
  return m;
}

std::array<double, 4> sorted_descending(std::array<double, 4> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

Mat4 spin_flip(const TwoQubitState& s) { return yy() * s.rho().conjugate() * yy(); }

double concurrence_from_spectrum(const std::array<double, 4>& l) {
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

ConcurrenceReport concurrence(const TwoQubitState& s) {
  // W = V diag(sqrt(mu)) so that rho = W W^dagger.
  const HermitianEigensystem<4> es = hermitian_eigensystem(s.rho());
  Mat4 w;
  for (std::size_t k = 0; k < 4; ++k) {
    const double root = std::sqrt(std::max(es.values[k], 0.0));
    for (std::size_t i = 0; i < 4; ++i) w(i, k) = es.vectors(i, k) * root;
  }
  const Mat4 tau = w.transpose() * yy() * w;

  ConcurrenceReport report;
  report.lambdas = singular_values(tau);
  report.concurrence = std::min(1.0, concurrence_from_spectrum(report.lambdas));
  report.eof = eof_from_concurrence(report.concurrence);
  return report;
}

std::array<double, 4> concurrence_spectrum_product_form(const TwoQubitState& s) {
  const Vec4 ev = general_eigenvalues(s.rho() * spin_flip(s));
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (ev[k].real() < -kEigenTol || std::abs(ev[k].imag()) > kEigenTol) {
      std::ostringstream msg;
      msg << "concurrence: eigenvalue " << ev[k] << " of rho * spin_flip(rho) is not a non-negative real";
      throw NumericalError(msg.str());
    }
    out[k] = std::sqrt(std::max(ev[k].real(), 0.0));
  }
  return sorted_descending(out);
}

std::array<double, 4> concurrence_spectrum_root_form(const TwoQubitState& s) {
  const Mat4 root = matrix_sqrt_psd(s.rho());
  const Mat4 inner = (root * spin_flip(s) * root).hermitian_part();
  const Mat4 r = matrix_sqrt_psd(inner);
  const HermitianEigensystem<4> es = hermitian_eigensystem(r);
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = std::max(es.values[k], 0.0);
  return sorted_descending(out);
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double eof_from_concurrence(double c) {
  const double cc = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - cc * cc)));
}

double eof(const TwoQubitState& s) { return concurrence(s).eof; }

}  // namespace qfilter
