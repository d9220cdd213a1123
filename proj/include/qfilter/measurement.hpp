#pragma once

// Two-outcome local measurements and the expected concurrence after them.
//
// With M0^dagger M0 = m0^2 |m0><m0| + m1^2 |m1><m1| and strengths
// m0 = sin(theta), m1 = sin(phi), completeness fixes
// M1^dagger M1 = cos^2(theta) |m0><m0| + cos^2(phi) |m1><m1|.

#include <array>

#include "qfilter/filtering.hpp"

namespace qfilter {

class DichotomicMeasurement {
 public:
  /// theta, phi in [0, pi/2]; basis columns must be orthonormal to 1e-12.
  static DichotomicMeasurement from_angles(double theta, double phi,
                                           const std::array<Vec2, 2>& basis = computational_basis());

  /// Strengths in [0, 1], mapped to angles by arcsine.
  static DichotomicMeasurement from_strengths(double m0, double m1,
                                              const std::array<Vec2, 2>& basis = computational_basis());

  static std::array<Vec2, 2> computational_basis() { return {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}}; }

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  const std::array<Vec2, 2>& basis() const { return basis_; }
  std::array<double, 2> strengths() const { return {std::sin(theta_), std::sin(phi_)}; }

  /// Positive part of outcome k (0 or 1).
  Mat2 positive_operator(int outcome) const;

  /// Outcome k as a filtering operation on the given side.
  FilterOperator branch_filter(int outcome, Side side) const;

  /// |det M0| + |det M1| = |m0 m1| + sqrt((1 - m0^2)(1 - m1^2)) = cos(theta - phi).
  double determinant_sum() const;

 private:
  DichotomicMeasurement(double theta, double phi, const std::array<Vec2, 2>& basis)
      : theta_(theta), phi_(phi), basis_(basis) {}

  double theta_;
  double phi_;
  std::array<Vec2, 2> basis_;
};

/// sum_k p_k C(post-state_k), each branch evolved through apply_filter.
/// Branches with probability <= 1e-12 contribute zero.
double expected_concurrence(const TwoQubitState& s, const DichotomicMeasurement& m, Side side);

/// Four-branch expectation for independent measurements on both sides.
double expected_concurrence_product(const TwoQubitState& s, const DichotomicMeasurement& alice,
                                    const DichotomicMeasurement& bob);

}  // namespace qfilter
