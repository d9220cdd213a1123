#pragma once

// Local filtering operations on one qubit of a two-qubit state.
//
// A filter is stored through its positive part K = 1/2 (x0 I + x . sigma);
// the unitary factor of a polar decomposition never changes entanglement,
// so it is dropped. K is a valid filter iff |x| <= x0 <= 2 - |x|, i.e. both
// eigenvalues (x0 +- |x|) / 2 lie in [0, 1].

#include <optional>
#include <utility>

#include "qfilter/entanglement.hpp"
#include "qfilter/state.hpp"

namespace qfilter {

class FilterOperator {
 public:
  /// Throws ValidationError ("invalid filter: ...") naming the violated
  /// inequality when the parameters fall outside the validity region.
  static FilterOperator from_params(double x0, const Vec3& x, Side side);

  /// Reads (x0, x) off a Hermitian 2x2 matrix as x0 = tr K, x_j = tr(K sigma_j)
  /// and validates the result.
  static FilterOperator from_positive_matrix(const Mat2& k, Side side);

  static FilterOperator identity(Side side) { return from_params(2.0, {0.0, 0.0, 0.0}, side); }

  double x0() const { return x0_; }
  const Vec3& x() const { return x_; }
  Side side() const { return side_; }

  /// |x| / x0; empty for the zero operator.
  std::optional<double> omega() const;

  /// (x0 + |x|) / 2 and (x0 - |x|) / 2.
  std::pair<double, double> eigenvalues() const;

  /// The realized 2x2 operator K.
  Mat2 matrix() const;

  /// K (x) I or I (x) K depending on the side.
  Mat4 embedded() const;

 private:
  FilterOperator(double x0, const Vec3& x, Side side) : x0_(x0), x_(x), side_(side) {}

  double x0_;
  Vec3 x_;
  Side side_;
};

struct FilterOutcome {
  TwoQubitState post_state;
  double probability;         ///< tr((K^2 (x) I) rho)
  double ratio;               ///< |det K| / probability, from the realized matrices
  double concurrence_before;
  double concurrence_after;
};

struct PolarDecomposition {
  Mat2 unitary;
  Mat2 positive;
};

/// F = U K with K = sqrt(F^dagger F). On the null space of K the unitary is
/// completed with unit phase relative to the right singular vectors, so a
/// positive semidefinite F yields U = I. Throws ValidationError when
/// F^dagger F exceeds the identity by more than 1e-9 in operator norm.
PolarDecomposition polar_decompose(const Mat2& f);

/// Post-filter state (K rho K^dagger) / p, recomputing concurrence on both
/// sides. Throws NumericalError on "vanishing success probability" (p <= 1e-12).
FilterOutcome apply_filter(const TwoQubitState& s, const FilterOperator& f);

/// (x0^2 - |x|^2) / 4
double filter_determinant(const FilterOperator& f);

/// (x0^2 + |x|^2 + 2 x0 x . a) / 4 with a the Bloch vector on the filter's side.
double success_probability(const TwoQubitState& s, const FilterOperator& f);

/// filter_determinant / success_probability: the factor by which the filter
/// multiplies the concurrence.
double predicted_ratio(const TwoQubitState& s, const FilterOperator& f);

/// 1 / sqrt(1 - a^2), the largest concurrence gain any single-side filter
/// can give when the marginal Bloch vector on that side has length a.
double ratio_upper_bound(double a);

/// Filter attaining ratio_upper_bound: x0 = 1 + r, x = -(1 - r) a_vec / a with
/// r = sqrt((1 - a) / (1 + a)). Its larger eigenvalue is exactly 1. Returns
/// the identity for a < 1e-12; rejects a >= 1 ("pure marginal").
FilterOperator optimal_filter(const Vec3& bloch, Side side);

/// 1 - a
double optimal_success_probability(double a);

struct TwoSidedFilters {
  FilterOperator alice;
  FilterOperator bob;
  double total_ratio;  ///< 1 / sqrt((1 - a^2)(1 - b^2))
};

/// Alice's and Bob's optimal filters, both computed from the marginals of
/// `s` itself, to be applied Alice first.
TwoSidedFilters optimal_two_sided(const TwoQubitState& s);

}  // namespace qfilter
