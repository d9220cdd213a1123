#include "qfilter/state.hpp"

#include <random>
#include <sstream>

namespace qfilter {

namespace {

constexpr double kStateTol = 1e-9;
constexpr double kPurityBoundTol = 1e-8;

[[noreturn]] void reject(const std::string& what, double value) {
  std::ostringstream msg;
  msg.precision(12);
  msg << "invalid two-qubit state: " << what << " (" << value << ")";
  throw ValidationError(msg.str());
}

PauliCoefficients decompose(const Mat4& rho) {
  PauliCoefficients c;
  for (int j = 1; j <= 3; ++j) {
    c.a[j - 1] = (rho * pauli_product(j, 0)).trace().real();
    c.b[j - 1] = (rho * pauli_product(0, j)).trace().real();
    for (int k = 1; k <= 3; ++k) c.t[j - 1][k - 1] = (rho * pauli_product(j, k)).trace().real();
  }
  return c;
}

}  // namespace

Mat2 SingleQubitState::density_matrix() const {
  Mat2 m = Mat2::identity();
  for (int j = 1; j <= 3; ++j) m += pauli(j) * bloch[j - 1];
  return m * 0.5;
}

Mat4 pauli_product(int j, int k) { return tensor_product(pauli(j), pauli(k)); }

Mat4 assemble_from_pauli(const PauliCoefficients& c) {
  Mat4 m = Mat4::identity();
  for (int j = 1; j <= 3; ++j) {
    m += pauli_product(j, 0) * c.a[j - 1];
    m += pauli_product(0, j) * c.b[j - 1];
    for (int k = 1; k <= 3; ++k) m += pauli_product(j, k) * c.t[j - 1][k - 1];
  }
  return m * 0.25;
}

Mat2 partial_trace(const Mat4& rho, Side keep) {
  Mat2 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == Side::Alice) {
          out(i, j) += rho(2 * i + k, 2 * j + k);
        } else {
          out(i, j) += rho(2 * k + i, 2 * k + j);
        }
      }
  return out;
}

TwoQubitState TwoQubitState::from_density_matrix(const Mat4& m) {
  const double violation = m.hermiticity_violation();
  if (violation > kStateTol) reject("not Hermitian, max |M_ij - conj(M_ji)|", violation);

  const Mat4 rho = m.hermitian_part();
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) reject("trace differs from 1", tr);

  const double min_eig = hermitian_eigensystem(rho, kStateTol).values[3];
  if (min_eig < -kStateTol) reject("negative eigenvalue", min_eig);

  PauliCoefficients pauli = decompose(rho);
  // Implied by the checks above up to rounding; kept as a guard on the
  // coordinate computation itself.
  double total = dot(pauli.a, pauli.a) + dot(pauli.b, pauli.b);
  for (const Vec3& row : pauli.t) total += dot(row, row);
  if (total > 3.0 + kPurityBoundTol) reject("|a|^2 + |b|^2 + |T|^2 exceeds 3", total);

  return TwoQubitState(rho, pauli);
}

TwoQubitState TwoQubitState::from_pauli(const PauliCoefficients& coefficients) {
  return from_density_matrix(assemble_from_pauli(coefficients));
}

TwoQubitState random_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4 g;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Mat4 rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return TwoQubitState::from_density_matrix(rho);
}

}  // namespace qfilter
