#include "qfilter/oracle.hpp"

#include <numbers>
#include <random>
#include <tuple>

namespace qfilter {

namespace {

constexpr double kEntangledThreshold = 1e-6;

struct Candidate {
  double ratio;
  double probability;
  std::array<double, 4> params;
};

// Strict "a is preferred over b".
bool better(const Candidate& a, const Candidate& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.params < b.params;
}

std::array<Vec2, 2> haar_basis(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec2 u{Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))};
  const double n = norm(u);
  for (Complex& z : u) z /= n;
  return {u, Vec2{-std::conj(u[1]), std::conj(u[0])}};
}

}  // namespace

std::vector<Vec3> fibonacci_sphere(std::size_t count) {
  std::vector<Vec3> out;
  out.reserve(count);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double angle = golden_angle * static_cast<double>(i);
    out.push_back({r * std::cos(angle), r * std::sin(angle), z});
  }
  return out;
}

double achieved_ratio(const FilterOutcome& outcome) {
  if (outcome.concurrence_before >= kEntangledThreshold) {
    return outcome.concurrence_after / outcome.concurrence_before;
  }
  return outcome.ratio;
}

SearchResult grid_search_optimal_filter(const TwoQubitState& s, int resolution, Side side) {
  if (resolution < 8) throw ValidationError("grid_search_optimal_filter: resolution must be >= 8");
  const Vec3& bloch = s.bloch(side);
  const double a = norm(bloch);
  if (a >= 1.0) throw ValidationError("grid_search_optimal_filter: pure marginal (|a| = 1)");

  std::vector<Vec3> directions = fibonacci_sphere(2 * static_cast<std::size_t>(resolution));
  if (a > 0.0) {
    const Vec3 unit{bloch[0] / a, bloch[1] / a, bloch[2] / a};
    directions.push_back(unit);
    directions.push_back({-unit[0], -unit[1], -unit[2]});
  }

  std::size_t evaluated = 0;
  std::optional<Candidate> best;
  std::optional<FilterOperator> best_filter;

  auto consider = [&](double x0, const Vec3& x) {
    const FilterOperator f = FilterOperator::from_params(x0, x, side);
    const FilterOutcome outcome = apply_filter(s, f);
    ++evaluated;
    const Candidate c{achieved_ratio(outcome), outcome.probability, {x0, x[0], x[1], x[2]}};
    if (!best || better(c, *best)) {
      best = c;
      best_filter = f;
    }
  };

  // omega = 0 is the identity filter whatever the direction.
  consider(2.0, {0.0, 0.0, 0.0});
  for (int i = 1; i < resolution; ++i) {
    const double omega = static_cast<double>(i) / static_cast<double>(resolution);
    const double x0 = 2.0 / (1.0 + omega);
    const double length = x0 * omega;
    for (const Vec3& d : directions) consider(x0, {length * d[0], length * d[1], length * d[2]});
  }

  return SearchResult{*best_filter, best->ratio, best->probability, evaluated,
                      ratio_upper_bound(a) - best->ratio};
}

double random_search_measurement(const TwoQubitState& s, std::size_t samples, std::uint64_t seed, Side side) {
  if (samples < 1) throw ValidationError("random_search_measurement: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
  double best = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double theta = angle(rng);
    const double phi = angle(rng);
    const auto basis = haar_basis(rng);
    const double ec = expected_concurrence(s, DichotomicMeasurement::from_angles(theta, phi, basis), side);
    if (n == 0 || ec > best) best = ec;
  }
  return best;
}

}  // namespace qfilter
