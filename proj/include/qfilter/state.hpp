#pragma once

// Two-qubit density matrices together with their Pauli-basis coordinates:
//
//   rho = 1/4 (I(x)I + sum_j a_j s_j(x)I + sum_k b_k I(x)s_k + sum_jk T_jk s_j(x)s_k)

#include <array>
#include <cstdint>

#include "qfilter/linalg.hpp"

namespace qfilter {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

enum class Side { Alice, Bob };

inline double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Pauli coordinates (a, b, T) of a two-qubit operator.
struct PauliCoefficients {
  Vec3 a{};
  Vec3 b{};
  Mat3 t{};

  friend bool operator==(const PauliCoefficients&, const PauliCoefficients&) = default;
};

/// Reduced state 1/2 (I + bloch . sigma) of one qubit.
struct SingleQubitState {
  Vec3 bloch{};

  /// tr(rho^2) = (1 + |bloch|^2) / 2
  double purity() const { return 0.5 * (1.0 + dot(bloch, bloch)); }
  Mat2 density_matrix() const;
};

/// A validated two-qubit density matrix. Construction goes through
/// from_density_matrix or from_pauli, both of which reject anything that is
/// not Hermitian, unit-trace and positive semidefinite to 1e-9.
class TwoQubitState {
 public:
  /// Throws ValidationError naming the violated property ("not Hermitian",
  /// "trace", "negative eigenvalue") together with the offending value.
  static TwoQubitState from_density_matrix(const Mat4& m);

  /// Assembles rho from Pauli coordinates and validates it.
  static TwoQubitState from_pauli(const PauliCoefficients& coefficients);

  const Mat4& rho() const { return rho_; }
  const PauliCoefficients& pauli_decomposition() const { return pauli_; }
  const Vec3& alice_bloch() const { return pauli_.a; }
  const Vec3& bob_bloch() const { return pauli_.b; }
  const Mat3& correlations() const { return pauli_.t; }
  const Vec3& bloch(Side side) const { return side == Side::Alice ? pauli_.a : pauli_.b; }

  SingleQubitState reduced_state(Side side) const { return {bloch(side)}; }

 private:
  TwoQubitState(const Mat4& rho, const PauliCoefficients& pauli) : rho_(rho), pauli_(pauli) {}

  Mat4 rho_;
  PauliCoefficients pauli_;
};

/// The operator assembled from Pauli coordinates, without validation.
Mat4 assemble_from_pauli(const PauliCoefficients& coefficients);

/// sigma_j (x) sigma_k with index 0 the identity.
Mat4 pauli_product(int j, int k);

/// Partial trace over the other party, computed directly from matrix entries.
Mat2 partial_trace(const Mat4& rho, Side keep);

/// Random full-rank state G G^dagger / tr(G G^dagger) with G a 4x4 matrix of
/// independent standard normal real and imaginary parts. Deterministic in `seed`.
TwoQubitState random_state(std::uint64_t seed);

}  // namespace qfilter
