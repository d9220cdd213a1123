#include "qfilter/measurement.hpp"

#include <numbers>
#include <sstream>

namespace qfilter {

namespace {

constexpr double kBasisTol = 1e-12;
constexpr double kAngleTol = 1e-12;
constexpr double kMinBranchProbability = 1e-12;

void check_angle(const char* name, double angle) {
  if (!(angle >= -kAngleTol && angle <= std::numbers::pi / 2 + kAngleTol)) {
    std::ostringstream msg;
    msg << "invalid measurement: " << name << " = " << angle << " outside [0, pi/2]";
    throw ValidationError(msg.str());
  }
}

double probability_of(const TwoQubitState& s, const FilterOperator& f) {
  const Mat4 k = f.embedded();
  return (k * k * s.rho()).trace().real();
}

}  // namespace

DichotomicMeasurement DichotomicMeasurement::from_angles(double theta, double phi,
                                                         const std::array<Vec2, 2>& basis) {
  check_angle("theta", theta);
  check_angle("phi", phi);
  const double deviation =
      std::max({std::abs(norm(basis[0]) - 1.0), std::abs(norm(basis[1]) - 1.0), std::abs(inner(basis[0], basis[1]))});
  if (deviation > kBasisTol) {
    std::ostringstream msg;
    msg << "invalid measurement: basis is not orthonormal (deviation " << deviation << ")";
    throw ValidationError(msg.str());
  }
  const double half_pi = std::numbers::pi / 2;
  return DichotomicMeasurement(std::clamp(theta, 0.0, half_pi), std::clamp(phi, 0.0, half_pi), basis);
}

DichotomicMeasurement DichotomicMeasurement::from_strengths(double m0, double m1,
                                                            const std::array<Vec2, 2>& basis) {
  for (double m : {m0, m1}) {
    if (!(m >= 0.0 && m <= 1.0)) {
      std::ostringstream msg;
      msg << "invalid measurement: strength " << m << " outside [0, 1]";
      throw ValidationError(msg.str());
    }
  }
  return from_angles(std::asin(m0), std::asin(m1), basis);
}

Mat2 DichotomicMeasurement::positive_operator(int outcome) const {
  if (outcome != 0 && outcome != 1) throw ValidationError("measurement outcome must be 0 or 1");
  const double w0 = outcome == 0 ? std::sin(theta_) : std::cos(theta_);
  const double w1 = outcome == 0 ? std::sin(phi_) : std::cos(phi_);
  return (Mat2::outer(basis_[0], basis_[0]) * w0 + Mat2::outer(basis_[1], basis_[1]) * w1).hermitian_part();
}

FilterOperator DichotomicMeasurement::branch_filter(int outcome, Side side) const {
  return FilterOperator::from_positive_matrix(positive_operator(outcome), side);
}

double DichotomicMeasurement::determinant_sum() const {
  return std::sin(theta_) * std::sin(phi_) + std::cos(theta_) * std::cos(phi_);
}

double expected_concurrence(const TwoQubitState& s, const DichotomicMeasurement& m, Side side) {
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const FilterOperator f = m.branch_filter(k, side);
    if (probability_of(s, f) <= kMinBranchProbability) continue;
    const FilterOutcome out = apply_filter(s, f);
    total += out.probability * out.concurrence_after;
  }
  return total;
}

double expected_concurrence_product(const TwoQubitState& s, const DichotomicMeasurement& alice,
                                    const DichotomicMeasurement& bob) {
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const FilterOperator fa = alice.branch_filter(k, Side::Alice);
    if (probability_of(s, fa) <= kMinBranchProbability) continue;
    const FilterOutcome first = apply_filter(s, fa);
    for (int j = 0; j < 2; ++j) {
      const FilterOperator fb = bob.branch_filter(j, Side::Bob);
      // Joint probability p(k, j) = p(k) p(j | k).
      if (first.probability * probability_of(first.post_state, fb) <= kMinBranchProbability) continue;
      const FilterOutcome second = apply_filter(first.post_state, fb);
      total += first.probability * second.probability * second.concurrence_after;
    }
  }
  return total;
}

}  // namespace qfilter
