#pragma once

#include <array>

#include "qfilter/state.hpp"

namespace qfilter {

struct ConcurrenceReport {
  std::array<double, 4> lambdas{};  ///< descending, non-negative
  double concurrence = 0.0;
  double eof = 0.0;
};

/// (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)
Mat4 spin_flip(const TwoQubitState& s);

/// Concurrence max(0, l1 - l2 - l3 - l4) and entanglement of formation.
///
/// The l_i are computed as the singular values of tau = W^T (sigma_y (x) sigma_y) W
/// where rho = W W^dagger. They coincide with the square roots of the
/// eigenvalues of rho * spin_flip(rho) and with the eigenvalues of
/// sqrt(sqrt(rho) spin_flip(rho) sqrt(rho)), but unlike those routes they do
/// not lose half the digits on near-zero values (rank-deficient states).
ConcurrenceReport concurrence(const TwoQubitState& s);

/// Cross-check route: descending square roots of the eigenvalues of
/// rho * spin_flip(rho) from the non-Hermitian eigensolver. Throws
/// NumericalError if an eigenvalue has real part below -1e-8 or imaginary
/// part above 1e-8.
std::array<double, 4> concurrence_spectrum_product_form(const TwoQubitState& s);

/// Cross-check route: eigenvalues of R = sqrt(sqrt(rho) spin_flip(rho) sqrt(rho)).
std::array<double, 4> concurrence_spectrum_root_form(const TwoQubitState& s);

/// max(0, l1 - l2 - l3 - l4) for a descending spectrum.
double concurrence_from_spectrum(const std::array<double, 4>& lambdas);

/// -x log2 x - (1-x) log2 (1-x), zero at both endpoints.
double binary_entropy(double x);

/// h((1 + sqrt(1 - C^2)) / 2)
double eof_from_concurrence(double c);

double eof(const TwoQubitState& s);

}  // namespace qfilter
