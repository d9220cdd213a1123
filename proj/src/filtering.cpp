#include "qfilter/filtering.hpp"

#include <sstream>

namespace qfilter {

namespace {

constexpr double kRegionTol = 1e-12;
constexpr double kMinProbability = 1e-12;
constexpr double kOperatorNormTol = 1e-9;

std::string side_name(Side side) { return side == Side::Alice ? "A" : "B"; }

Vec2 orthogonal_complement(const Vec2& v) { return {-std::conj(v[1]), std::conj(v[0])}; }

}  // namespace

FilterOperator FilterOperator::from_params(double x0, const Vec3& x, Side side) {
  const double nx = norm(x);
  std::ostringstream msg;
  msg.precision(15);
  if (!std::isfinite(x0) || !std::isfinite(nx)) {
    msg << "invalid filter: non-finite parameters";
    throw ValidationError(msg.str());
  }
  if (nx > x0 + kRegionTol) {
    msg << "invalid filter: |x| <= x0 violated (|x| = " << nx << ", x0 = " << x0 << ")";
    throw ValidationError(msg.str());
  }
  if (x0 > 2.0 - nx + kRegionTol) {
    msg << "invalid filter: x0 <= 2 - |x| violated (x0 = " << x0 << ", |x| = " << nx << ")";
    throw ValidationError(msg.str());
  }
  return FilterOperator(x0, x, side);
}

FilterOperator FilterOperator::from_positive_matrix(const Mat2& k, Side side) {
  const double violation = k.hermiticity_violation();
  if (violation > kDefaultTol) {
    std::ostringstream msg;
    msg << "invalid filter: operator is not Hermitian (" << violation << ")";
    throw ValidationError(msg.str());
  }
  Vec3 x;
  for (int j = 1; j <= 3; ++j) x[j - 1] = (k * pauli(j)).trace().real();
  return from_params(k.trace().real(), x, side);
}

std::optional<double> FilterOperator::omega() const {
  if (x0_ <= 0.0) return std::nullopt;
  return norm(x_) / x0_;
}

std::pair<double, double> FilterOperator::eigenvalues() const {
  const double nx = norm(x_);
  return {0.5 * (x0_ + nx), 0.5 * (x0_ - nx)};
}

Mat2 FilterOperator::matrix() const {
  Mat2 k = Mat2::identity() * x0_;
  for (int j = 1; j <= 3; ++j) k += pauli(j) * x_[j - 1];
  return k * 0.5;
}

Mat4 FilterOperator::embedded() const {
  return side_ == Side::Alice ? tensor_product(matrix(), Mat2::identity())
                              : tensor_product(Mat2::identity(), matrix());
}

PolarDecomposition polar_decompose(const Mat2& f) {
  const Mat2 gram = (f.adjoint() * f).hermitian_part();
  const HermitianEigensystem<2> es = hermitian_eigensystem(gram);
  if (es.values[0] > 1.0 + kOperatorNormTol) {
    std::ostringstream msg;
    msg << "not a valid filtering operation: ||F^dagger F|| = " << es.values[0] << " exceeds 1";
    throw ValidationError(msg.str());
  }

  PolarDecomposition out{Mat2::identity(), matrix_sqrt_psd(gram)};
  const double f0 = std::sqrt(std::max(es.values[0], 0.0));
  const double f1 = std::sqrt(std::max(es.values[1], 0.0));
  constexpr double kZeroSingular = 1e-12;
  if (f0 <= kZeroSingular) return out;

  const Vec2 beta0 = es.vectors.column(0);
  const Vec2 beta1 = es.vectors.column(1);
  Vec2 alpha0 = f * beta0;
  for (Complex& z : alpha0) z /= f0;
  const double n0 = norm(alpha0);
  for (Complex& z : alpha0) z /= n0;

  // alpha1 spans the complement of alpha0; only its phase is free.
  Vec2 alpha1 = orthogonal_complement(alpha0);
  const Complex z = f1 > kZeroSingular ? inner(alpha1, Vec2(f * beta1)) : std::conj(inner(beta1, alpha1));
  if (std::abs(z) > kZeroSingular) {
    for (Complex& w : alpha1) w *= z / std::abs(z);
  }
  out.unitary = Mat2::outer(alpha0, beta0) + Mat2::outer(alpha1, beta1);
  return out;
}

FilterOutcome apply_filter(const TwoQubitState& s, const FilterOperator& f) {
  const Mat4 k = f.embedded();
  const double p = (k.adjoint() * k * s.rho()).trace().real();
  if (p <= kMinProbability) {
    std::ostringstream msg;
    msg << "vanishing success probability (p = " << p << ") for filter on side " << side_name(f.side());
    throw NumericalError(msg.str());
  }
  Mat4 post = k * s.rho() * k.adjoint();
  post *= 1.0 / p;
  TwoQubitState post_state = TwoQubitState::from_density_matrix(post);

  const double det = std::abs(determinant(f.matrix()));
  const double before = concurrence(s).concurrence;
  const double after = concurrence(post_state).concurrence;
  return FilterOutcome{std::move(post_state), p, det / p, before, after};
}

double filter_determinant(const FilterOperator& f) {
  const Vec3& x = f.x();
  return 0.25 * (f.x0() * f.x0() - dot(x, x));
}

double success_probability(const TwoQubitState& s, const FilterOperator& f) {
  const Vec3& x = f.x();
  return 0.25 * (f.x0() * f.x0() + dot(x, x) + 2.0 * f.x0() * dot(x, s.bloch(f.side())));
}

double predicted_ratio(const TwoQubitState& s, const FilterOperator& f) {
  const double p = success_probability(s, f);
  if (p <= kMinProbability) {
    std::ostringstream msg;
    msg << "vanishing success probability (p = " << p << ") for filter on side " << side_name(f.side());
    throw NumericalError(msg.str());
  }
  return filter_determinant(f) / p;
}

double ratio_upper_bound(double a) {
  if (!(a >= 0.0)) throw ValidationError("ratio_upper_bound: Bloch length must be non-negative");
  if (a >= 1.0) throw ValidationError("ratio_upper_bound: bound diverges at pure marginal (a >= 1)");
  return 1.0 / std::sqrt((1.0 - a) * (1.0 + a));
}

FilterOperator optimal_filter(const Vec3& bloch, Side side) {
  const double a = norm(bloch);
  if (a > 1.0 + kDefaultTol) {
    std::ostringstream msg;
    msg << "optimal_filter: Bloch vector length " << a << " exceeds 1";
    throw ValidationError(msg.str());
  }
  if (a >= 1.0) {
    throw ValidationError("optimal_filter: pure marginal on side " + side_name(side) +
                          " (|a| = 1), success probability would be 0");
  }
  if (a < 1e-12) return FilterOperator::identity(side);

  const double r = std::sqrt((1.0 - a) / (1.0 + a));
  const double scale = -(1.0 - r) / a;
  return FilterOperator::from_params(1.0 + r, {scale * bloch[0], scale * bloch[1], scale * bloch[2]}, side);
}

double optimal_success_probability(double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw ValidationError("optimal_success_probability: Bloch length must lie in [0, 1]");
  }
  return 1.0 - a;
}

TwoSidedFilters optimal_two_sided(const TwoQubitState& s) {
  FilterOperator alice = optimal_filter(s.alice_bloch(), Side::Alice);
  FilterOperator bob = optimal_filter(s.bob_bloch(), Side::Bob);
  const double total = ratio_upper_bound(norm(s.alice_bloch())) * ratio_upper_bound(norm(s.bob_bloch()));
  return {alice, bob, total};
}

}  // namespace qfilter
