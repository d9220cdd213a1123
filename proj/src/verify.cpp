#include "qfilter/verify.hpp"

#include <functional>
#include <numbers>
#include <random>

#include "qfilter/entanglement.hpp"
#include "qfilter/filtering.hpp"
#include "qfilter/io.hpp"
#include "qfilter/measurement.hpp"
#include "qfilter/oracle.hpp"
#include "qfilter/state.hpp"

namespace qfilter {

namespace {

using nlohmann::json;

class Recorder {
 public:
  Recorder(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void record(double residual, const std::function<json()>& describe) {
    ++result_.cases;
    const bool fail = !(residual <= result_.tolerance);
    if (fail && (result_.passed || residual > result_.worst_residual)) {
      result_.failing_case = describe();
      (*result_.failing_case)["residual"] = residual;
    }
    if (fail) result_.passed = false;
    if (!(residual <= result_.worst_residual)) result_.worst_residual = residual;
  }

  SuiteResult finish() && { return std::move(result_); }

 private:
  SuiteResult result_;
};

struct Context {
  std::uint64_t seed;
  std::uint64_t stream;
  std::size_t trials;

  std::uint64_t case_seed(std::size_t i) const { return derive_seed(seed, stream, i); }
};

json describe_state(const Context& ctx, std::size_t i, const TwoQubitState& s) {
  return json{{"seed", ctx.seed}, {"trial", i}, {"state", state_to_json(s)}};
}

Mat4 random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

Mat2 random_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec2 u{Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))};
  const double n = norm(u);
  for (Complex& z : u) z /= n;
  const Complex phase = std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(rng));
  return {u[0], -std::conj(u[1]) * phase, u[1], std::conj(u[0]) * phase};
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

FilterOperator random_filter(std::mt19937_64& rng, Side side) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 d = random_direction(rng);
  const double len = unit(rng);
  const double x0 = len + (2.0 - 2.0 * len) * unit(rng);
  return FilterOperator::from_params(x0, {len * d[0], len * d[1], len * d[2]}, side);
}

Side random_side(std::mt19937_64& rng) { return rng() % 2 == 0 ? Side::Alice : Side::Bob; }

// Rotation matrix from a unit quaternion.
Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double w = gauss(rng), x = gauss(rng), y = gauss(rng), z = gauss(rng);
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n, x /= n, y /= n, z /= n;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

Vec3 apply(const Mat3& r, const Vec3& v) { return {dot(r[0], v), dot(r[1], v), dot(r[2], v)}; }

double max_diff(const Vec3& u, const Vec3& v) {
  return std::max({std::abs(u[0] - v[0]), std::abs(u[1] - v[1]), std::abs(u[2] - v[2])});
}

// --- linalg ----------------------------------------------------------------

SuiteResult hermitian_reconstruction(const Context& ctx) {
  Recorder rec("linalg.hermitian_reconstruction", 1e-10);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const Mat4 h = random_matrix(rng).hermitian_part();
    const auto es = hermitian_eigensystem(h);
    Mat4 rebuilt;
    for (std::size_t k = 0; k < 4; ++k) rebuilt += Mat4::outer(es.vectors.column(k), es.vectors.column(k)) * es.values[k];
    rec.record(max_abs_diff(rebuilt, h), [&] { return json{{"seed", ctx.seed}, {"trial", i}}; });
  }
  return std::move(rec).finish();
}

SuiteResult eigenvalue_trace_determinant(const Context& ctx) {
  Recorder rec("linalg.eigenvalue_trace_determinant", 1e-9);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const Mat4 m = random_matrix(rng);
    const Vec4 ev = general_eigenvalues(m);
    Complex sum = 0.0, prod = 1.0;
    for (const Complex& z : ev) sum += z, prod *= z;
    const Complex det = determinant(m);
    const double residual = std::max(std::abs(sum - m.trace()) / std::max(1.0, std::abs(m.trace())),
                                     std::abs(prod - det) / std::max(1.0, std::abs(det)));
    rec.record(residual, [&] { return json{{"seed", ctx.seed}, {"trial", i}}; });
  }
  return std::move(rec).finish();
}

// --- state -----------------------------------------------------------------

SuiteResult pauli_round_trip(const Context& ctx) {
  Recorder rec("state.pauli_round_trip", 1e-12);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const TwoQubitState back = TwoQubitState::from_pauli(s.pauli_decomposition());
    rec.record(max_abs_diff(back.rho(), s.rho()), [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult purity_constraint(const Context& ctx) {
  Recorder rec("state.purity_constraint", 1e-8);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const PauliCoefficients& c = s.pauli_decomposition();
    double total = dot(c.a, c.a) + dot(c.b, c.b);
    for (const Vec3& row : c.t) total += dot(row, row);
    rec.record(std::max(0.0, total - 3.0), [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult product_correlations(const Context& ctx) {
  Recorder rec("state.product_correlations", 1e-10);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vec3 da = random_direction(rng), db = random_direction(rng);
    const double la = unit(rng), lb = unit(rng);
    const SingleQubitState qa{{la * da[0], la * da[1], la * da[2]}};
    const SingleQubitState qb{{lb * db[0], lb * db[1], lb * db[2]}};
    const TwoQubitState s =
        TwoQubitState::from_density_matrix(tensor_product(qa.density_matrix(), qb.density_matrix()));
    double residual = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        residual = std::max(residual, std::abs(s.correlations()[j][k] - s.alice_bloch()[j] * s.bob_bloch()[k]));
    rec.record(residual, [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

// --- entanglement ----------------------------------------------------------

SuiteResult dual_pipeline(const Context& ctx) {
  Recorder rec("entanglement.dual_pipeline", 1e-7);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const auto product = concurrence_spectrum_product_form(s);
    const auto root = concurrence_spectrum_root_form(s);
    const auto main = concurrence(s).lambdas;
    double residual = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      residual = std::max({residual, std::abs(product[k] - root[k]), std::abs(main[k] - root[k])});
    }
    rec.record(residual, [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult local_unitary_invariance(const Context& ctx) {
  Recorder rec("entanglement.local_unitary_invariance", 1e-9);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const Mat4 u = tensor_product(random_unitary2(rng), random_unitary2(rng));
    const TwoQubitState rotated = TwoQubitState::from_density_matrix(u * s.rho() * u.adjoint());
    rec.record(std::abs(concurrence(rotated).concurrence - concurrence(s).concurrence),
               [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult pure_state_formula(const Context& ctx) {
  Recorder rec("entanglement.pure_state_formula", 1e-10);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec4 psi;
    for (Complex& z : psi) z = Complex(gauss(rng), gauss(rng));
    const double n = norm(psi);
    for (Complex& z : psi) z /= n;
    const TwoQubitState s = TwoQubitState::from_density_matrix(Mat4::outer(psi, psi));
    const double expected = 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
    rec.record(std::abs(concurrence(s).concurrence - expected), [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult measure_bounds(const Context& ctx) {
  Recorder rec("entanglement.range_and_monotonicity", 0.0);
  double prev_c = -1.0, prev_e = -1.0;
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const ConcurrenceReport r = concurrence(s);
    double residual = std::max({0.0, -r.concurrence, r.concurrence - 1.0, -r.eof, r.eof - 1.0});
    rec.record(residual, [&] { return describe_state(ctx, i, s); });
    // EoF as a function of C on an increasing grid.
    const double c = static_cast<double>(i + 1) / static_cast<double>(ctx.trials);
    const double e = eof_from_concurrence(c);
    if (c > prev_c) rec.record(std::max(0.0, prev_e - e), [&] { return json{{"concurrence", c}}; });
    prev_c = c;
    prev_e = e;
  }
  return std::move(rec).finish();
}

// --- filtering -------------------------------------------------------------

SuiteResult transformation_law(const Context& ctx) {
  Recorder rec("filtering.transformation_law", 1e-8);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const FilterOperator f = random_filter(rng, random_side(rng));
    if (success_probability(s, f) <= 1e-6) continue;
    const FilterOutcome out = apply_filter(s, f);
    const double predicted = out.concurrence_before * predicted_ratio(s, f);
    rec.record(std::abs(out.concurrence_after - predicted), [&] {
      json j = describe_state(ctx, i, s);
      j["filter"] = filter_to_json(f);
      return j;
    });
  }
  return std::move(rec).finish();
}

SuiteResult probability_formula(const Context& ctx) {
  Recorder rec("filtering.probability_formula", 1e-12);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const FilterOperator f = random_filter(rng, random_side(rng));
    const Mat4 k = f.embedded();
    const double direct = (k * k * s.rho()).trace().real();
    rec.record(std::abs(direct - success_probability(s, f)), [&] {
      json j = describe_state(ctx, i, s);
      j["filter"] = filter_to_json(f);
      return j;
    });
  }
  return std::move(rec).finish();
}

SuiteResult optimal_attainment(const Context& ctx, bool probability) {
  Recorder rec(probability ? "filtering.optimal_probability" : "filtering.optimal_ratio",
               probability ? 1e-10 : 1e-8);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const Side side = random_side(rng);
    const double a = norm(s.bloch(side));
    const FilterOutcome out = apply_filter(s, optimal_filter(s.bloch(side), side));
    const double residual = probability ? std::abs(out.probability - (1.0 - a))
                                        : std::abs(achieved_ratio(out) - ratio_upper_bound(a));
    rec.record(residual, [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult inverse_sqrt_proportionality(const Context& ctx) {
  Recorder rec("filtering.inverse_sqrt_proportionality", 1e-10);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const double a = norm(s.alice_bloch());
    if (a <= 1e-6) continue;
    const auto es = hermitian_eigensystem(s.reduced_state(Side::Alice).density_matrix());
    Mat2 inv_sqrt;
    for (std::size_t k = 0; k < 2; ++k) {
      inv_sqrt += Mat2::outer(es.vectors.column(k), es.vectors.column(k)) * (1.0 / std::sqrt(es.values[k]));
    }
    const Mat2 expected = inv_sqrt * std::sqrt((1.0 - a) / 2.0);
    rec.record(max_abs_diff(optimal_filter(s.alice_bloch(), Side::Alice).matrix(), expected),
               [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult invariance_class(const Context& ctx) {
  Recorder rec("filtering.invariance_class", 1e-8);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const Vec3& av = s.alice_bloch();
    const double a = norm(av);
    if (a <= 1e-6) continue;
    const double omega_minus = (1.0 - std::sqrt((1.0 - a) * (1.0 + a))) / a;
    const double x0_max = 1.0 + std::sqrt((1.0 - a) / (1.0 + a));
    // x0 spread over (0, x0_max]; the lower end keeps p away from zero.
    const double x0 = x0_max * (0.05 + 0.95 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const double scale = -x0 * omega_minus / a;
    const FilterOperator f = FilterOperator::from_params(x0, {scale * av[0], scale * av[1], scale * av[2]}, Side::Alice);
    const FilterOutcome out = apply_filter(s, f);
    rec.record(std::abs(achieved_ratio(out) - ratio_upper_bound(a)), [&] {
      json j = describe_state(ctx, i, s);
      j["filter"] = filter_to_json(f);
      return j;
    });
  }
  return std::move(rec).finish();
}

SuiteResult direction_covariance(const Context& ctx) {
  Recorder rec("filtering.direction_covariance", 1e-12);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const Vec3 d = random_direction(rng);
    const double len = 0.999 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Vec3 av{len * d[0], len * d[1], len * d[2]};
    const Mat3 r = random_rotation(rng);
    const FilterOperator base = optimal_filter(av, Side::Alice);
    const FilterOperator turned = optimal_filter(apply(r, av), Side::Alice);
    const double residual = std::max(max_diff(turned.x(), apply(r, base.x())), std::abs(turned.x0() - base.x0()));
    rec.record(residual, [&] { return json{{"seed", ctx.seed}, {"trial", i}, {"a", av}}; });
  }
  return std::move(rec).finish();
}

SuiteResult unitary_irrelevance(const Context& ctx) {
  Recorder rec("filtering.unitary_irrelevance", 1e-9);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const FilterOperator k = random_filter(rng, Side::Alice);
    if (success_probability(s, k) <= 1e-6) continue;
    const Mat2 f = random_unitary2(rng) * k.matrix();
    const PolarDecomposition polar = polar_decompose(f);
    const FilterOperator recovered = FilterOperator::from_positive_matrix(polar.positive, Side::Alice);
    const double residual = std::max({max_abs_diff(polar.unitary * polar.positive, f),
                                      max_abs_diff(polar.unitary * polar.unitary.adjoint(), Mat2::identity()),
                                      std::abs(achieved_ratio(apply_filter(s, recovered)) -
                                               achieved_ratio(apply_filter(s, k)))});
    rec.record(residual, [&] {
      json j = describe_state(ctx, i, s);
      j["filter"] = filter_to_json(k);
      return j;
    });
  }
  return std::move(rec).finish();
}

// --- measurement -----------------------------------------------------------

DichotomicMeasurement random_measurement(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
  const Mat2 u = random_unitary2(rng);
  const double theta = angle(rng);
  const double phi = angle(rng);
  return DichotomicMeasurement::from_angles(theta, phi, {u.column(0), u.column(1)});
}

SuiteResult measurement_monotonicity(const Context& ctx) {
  Recorder rec("measurement.monotonicity", 1e-10);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const DichotomicMeasurement m = random_measurement(rng);
    const double ec = expected_concurrence(s, m, random_side(rng));
    rec.record(std::max(0.0, ec - concurrence(s).concurrence), [&] {
      json j = describe_state(ctx, i, s);
      j["measurement"] = measurement_to_json(m);
      return j;
    });
  }
  return std::move(rec).finish();
}

SuiteResult measurement_angle_form(const Context& ctx) {
  Recorder rec("measurement.angle_form", 1e-9);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const DichotomicMeasurement m = random_measurement(rng);
    const double c = concurrence(s).concurrence;
    const double ec = expected_concurrence(s, m, random_side(rng));
    const auto [m0, m1] = m.strengths();
    const double by_strengths = c * (std::abs(m0 * m1) + std::sqrt((1.0 - m0 * m0) * (1.0 - m1 * m1)));
    const double residual =
        std::max(std::abs(ec - c * std::cos(m.theta() - m.phi())), std::abs(ec - by_strengths));
    rec.record(residual, [&] {
      json j = describe_state(ctx, i, s);
      j["measurement"] = measurement_to_json(m);
      return j;
    });
  }
  return std::move(rec).finish();
}

SuiteResult measurement_product(const Context& ctx) {
  Recorder rec("measurement.product_factorization", 1e-8);
  for (std::size_t i = 0; i < ctx.trials; ++i) {
    std::mt19937_64 rng(ctx.case_seed(i));
    const TwoQubitState s = random_state(rng());
    const DichotomicMeasurement ma = random_measurement(rng);
    const DichotomicMeasurement mb = random_measurement(rng);
    const double c = concurrence(s).concurrence;
    const double joint = expected_concurrence_product(s, ma, mb);
    double residual = std::abs(joint - c * ma.determinant_sum() * mb.determinant_sum());
    if (c > 1e-9) {
      const double factorized =
          expected_concurrence(s, ma, Side::Alice) * expected_concurrence(s, mb, Side::Bob) / c;
      residual = std::max(residual, std::abs(joint - factorized));
    }
    rec.record(residual, [&] {
      json j = describe_state(ctx, i, s);
      j["measurement_alice"] = measurement_to_json(ma);
      j["measurement_bob"] = measurement_to_json(mb);
      return j;
    });
  }
  return std::move(rec).finish();
}

// --- oracle ----------------------------------------------------------------

SuiteResult oracle_bound_validity(const Context& ctx) {
  Recorder rec("oracle.bound_validity", 1e-6);
  const std::size_t n = std::min<std::size_t>(ctx.trials, 10);
  for (std::size_t i = 0; i < n; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const SearchResult r = grid_search_optimal_filter(s, 16);
    rec.record(std::max(0.0, -r.gap_to_bound), [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult oracle_refinement(const Context& ctx) {
  Recorder rec("oracle.refinement_monotonicity", 1e-12);
  const std::size_t n = std::min<std::size_t>(ctx.trials, 5);
  for (std::size_t i = 0; i < n; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const double coarse = grid_search_optimal_filter(s, 8).best_ratio;
    const double fine = grid_search_optimal_filter(s, 16).best_ratio;
    rec.record(std::max(0.0, coarse - fine), [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

SuiteResult oracle_measurement_search(const Context& ctx) {
  Recorder rec("oracle.measurement_search", 1e-10);
  const std::size_t n = std::min<std::size_t>(ctx.trials, 10);
  for (std::size_t i = 0; i < n; ++i) {
    const TwoQubitState s = random_state(ctx.case_seed(i));
    const double best = random_search_measurement(s, 50, ctx.case_seed(i) ^ 0x9e3779b97f4a7c15ULL);
    rec.record(std::max(0.0, best - concurrence(s).concurrence), [&] { return describe_state(ctx, i, s); });
  }
  return std::move(rec).finish();
}

using Suite = std::function<SuiteResult(const Context&)>;

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      hermitian_reconstruction,
      eigenvalue_trace_determinant,
      pauli_round_trip,
      purity_constraint,
      product_correlations,
      dual_pipeline,
      local_unitary_invariance,
      pure_state_formula,
      measure_bounds,
      transformation_law,
      probability_formula,
      [](const Context& c) { return optimal_attainment(c, false); },
      [](const Context& c) { return optimal_attainment(c, true); },
      inverse_sqrt_proportionality,
      invariance_class,
      direction_covariance,
      unitary_irrelevance,
      measurement_monotonicity,
      measurement_angle_form,
      measurement_product,
      oracle_bound_validity,
      oracle_refinement,
      oracle_measurement_search,
  };
  return all;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ index);
}

std::vector<std::string> verification_suite_names() {
  std::vector<std::string> names;
  for (const SuiteResult& r : run_verification(0, 0)) names.push_back(r.name);
  return names;
}

std::vector<SuiteResult> run_verification(std::uint64_t seed, std::size_t trials) {
  std::vector<SuiteResult> results;
  const auto& all = suites();
  for (std::size_t k = 0; k < all.size(); ++k) {
    results.push_back(all[k](Context{seed, k, trials}));
  }
  return results;
}

}  // namespace qfilter
