// Acceptance gate. Prints one PASS/FAIL line per criterion; with an integer
// argument only that criterion runs. Exit status is nonzero if any selected
// criterion fails, including by exceeding its time budget.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "qfilter/entanglement.hpp"
#include "qfilter/filtering.hpp"
#include "qfilter/measurement.hpp"
#include "qfilter/oracle.hpp"
#include "qfilter/state.hpp"

using namespace qfilter;

namespace {

struct Verdict {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Vec4 haar_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec4 v;
  for (Complex& z : v) z = Complex(gauss(rng), gauss(rng));
  const double n = norm(v);
  for (Complex& z : v) z /= n;
  return v;
}

Vec2 haar_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec2 v{Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))};
  const double n = norm(v);
  for (Complex& z : v) z /= n;
  return v;
}

// (1 - w) * Ginibre state + w * Haar pure state, w uniform on [0, 1]. Unlike
// the plain Ginibre sampler this produces entangled states most of the time.
TwoQubitState mixed_sample(std::mt19937_64& rng) {
  const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const Vec4 psi = haar_vector(rng);
  return TwoQubitState::from_density_matrix(random_state(rng()).rho() * (1.0 - w) + Mat4::outer(psi, psi) * w);
}

TwoQubitState entangled_sample(std::mt19937_64& rng, double min_concurrence) {
  for (;;) {
    TwoQubitState s = mixed_sample(rng);
    if (concurrence(s).concurrence > min_concurrence) return s;
  }
}

FilterOperator random_filter(std::mt19937_64& rng, Side side) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
  const double n = norm(d);
  const double len = unit(rng);
  const double x0 = len + (2.0 - 2.0 * len) * unit(rng);
  return FilterOperator::from_params(x0, {len * d[0] / n, len * d[1] / n, len * d[2] / n}, side);
}

TwoQubitState pure(const Vec4& v) { return TwoQubitState::from_density_matrix(Mat4::outer(v, v)); }

// a = (0, 0, 0.6), T = diag(0.4, -0.4, 0.4)
TwoQubitState state_a06() {
  PauliCoefficients c;
  c.a = {0.0, 0.0, 0.6};
  c.t = {{{0.4, 0.0, 0.0}, {0.0, -0.4, 0.0}, {0.0, 0.0, 0.4}}};
  return TwoQubitState::from_pauli(c);
}

// a = (0, 0, 0.8), T = diag(0.2, -0.2, 0.2)
TwoQubitState state_a08() {
  PauliCoefficients c;
  c.a = {0.0, 0.0, 0.8};
  c.t = {{{0.2, 0.0, 0.0}, {0.0, -0.2, 0.0}, {0.0, 0.0, 0.2}}};
  return TwoQubitState::from_pauli(c);
}

Verdict concurrence_golden() {
  const double h = 1.0 / std::sqrt(2.0);
  const std::array<Vec4, 4> bells = {Vec4{h, 0, 0, h}, Vec4{h, 0, 0, -h}, Vec4{0, h, h, 0}, Vec4{0, h, -h, 0}};
  double bell_err = 0.0, product_err = 0.0, werner_err = 0.0;
  for (const Vec4& b : bells) bell_err = std::max(bell_err, std::abs(concurrence(pure(b)).concurrence - 1.0));

  std::mt19937_64 rng(101);
  for (int n = 0; n < 1000; ++n) {
    const Vec2 u = haar_qubit(rng), v = haar_qubit(rng);
    const Vec4 prod{u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]};
    product_err = std::max(product_err, concurrence(pure(prod)).concurrence);
  }
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const Vec4& singlet = bells[3];
    const TwoQubitState w =
        TwoQubitState::from_density_matrix(Mat4::outer(singlet, singlet) * p + Mat4::identity() * ((1.0 - p) / 4.0));
    werner_err = std::max(werner_err, std::abs(concurrence(w).concurrence - std::max(0.0, (3 * p - 1) / 2)));
  }
  const bool ok = bell_err <= 1e-10 && product_err <= 1e-10 && werner_err <= 1e-9;
  return {ok, "bell " + sci(bell_err) + " (tol 1e-10), product " + sci(product_err) + " (tol 1e-10), werner " +
                  sci(werner_err) + " (tol 1e-9)"};
}

Verdict transformation_law() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  int pairs = 0, entangled = 0;
  while (pairs < 1000) {
    const TwoQubitState s = mixed_sample(rng);
    const FilterOperator f = random_filter(rng, rng() % 2 ? Side::Alice : Side::Bob);
    const FilterOutcome out = apply_filter(s, f);
    if (out.probability <= 1e-6) continue;
    ++pairs;
    if (out.concurrence_before > 0.0) ++entangled;
    const double law = out.concurrence_before * std::abs(determinant(f.matrix())) / out.probability;
    worst = std::max(worst, std::abs(out.concurrence_after - law));
  }
  return {worst <= 1e-8, std::to_string(pairs) + " pairs (" + std::to_string(entangled) + " entangled), max |C' - C|det F|/p| " +
                             sci(worst) + " (tol 1e-8)"};
}

Verdict optimal_attainment() {
  std::mt19937_64 rng(303);
  double ratio_err = 0.0, prob_err = 0.0;
  int states = 0;
  while (states < 1000) {
    const TwoQubitState s = entangled_sample(rng, 1e-3);
    const double a = norm(s.alice_bloch());
    if (a >= 0.99) continue;
    ++states;
    const FilterOutcome out = apply_filter(s, optimal_filter(s.alice_bloch(), Side::Alice));
    const double bound = 1.0 / std::sqrt(1.0 - a * a);
    ratio_err = std::max(ratio_err, std::abs(out.concurrence_after / out.concurrence_before - bound));
    prob_err = std::max(prob_err, std::abs(out.probability - (1.0 - a)));
  }
  double spot_err = 0.0;
  const std::array<std::tuple<TwoQubitState, double, double>, 2> spots = {
      std::tuple{state_a06(), 1.25, 0.4}, std::tuple{state_a08(), 5.0 / 3.0, 0.2}};
  for (const auto& [s, ratio, prob] : spots) {
    const FilterOutcome out = apply_filter(s, optimal_filter(s.alice_bloch(), Side::Alice));
    spot_err = std::max({spot_err, std::abs(out.concurrence_after / out.concurrence_before - ratio),
                         std::abs(out.probability - prob)});
  }
  const bool ok = ratio_err <= 1e-8 && prob_err <= 1e-10 && spot_err <= 1e-10;
  return {ok, "ratio " + sci(ratio_err) + " (tol 1e-8), probability " + sci(prob_err) + " (tol 1e-10), spot values " +
                  sci(spot_err)};
}

Verdict bound_validity() {
  std::mt19937_64 rng(404);
  double worst_excess = -1.0, worst_gap = 0.0;
  for (int n = 0; n < 50; ++n) {
    TwoQubitState s = entangled_sample(rng, 0.01);
    while (norm(s.alice_bloch()) >= 0.99) s = entangled_sample(rng, 0.01);
    const SearchResult r = grid_search_optimal_filter(s, 100);
    worst_excess = std::max(worst_excess, -r.gap_to_bound);
    worst_gap = std::max(worst_gap, r.gap_to_bound);
  }
  // a = 0.8 puts the extremal omega = 1/2 on the grid i / 100.
  const SearchResult exact = grid_search_optimal_filter(state_a08(), 100);
  const double exact_err = std::abs(exact.best_ratio - 5.0 / 3.0);
  const bool ok = worst_excess <= 1e-6 && worst_gap <= 1e-3 && exact_err <= 1e-9;
  return {ok, "max excess over bound " + sci(worst_excess) + " (tol 1e-6), max gap " + sci(worst_gap) +
                  " (tol 1e-3), on-grid optimum error " + sci(exact_err) + " (tol 1e-9)"};
}

Verdict two_sided() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  int failures = 0;
  std::vector<double> relative;
  for (int n = 0; n < 200; ++n) {
    TwoQubitState s = entangled_sample(rng, 0.01);
    while (norm(s.alice_bloch()) >= 0.99 || norm(s.bob_bloch()) >= 0.99) s = entangled_sample(rng, 0.01);
    const TwoSidedFilters f = optimal_two_sided(s);
    const FilterOutcome first = apply_filter(s, f.alice);
    const FilterOutcome second = apply_filter(first.post_state, f.bob);
    const double a = norm(s.alice_bloch()), b = norm(s.bob_bloch());
    const double predicted = 1.0 / std::sqrt((1.0 - a * a) * (1.0 - b * b));
    const double err = std::abs(second.concurrence_after / first.concurrence_before - predicted);
    if (err > 1e-8) ++failures;
    worst = std::max(worst, err);
    relative.push_back(err / predicted);
  }
  std::sort(relative.begin(), relative.end());
  return {worst <= 1e-8, "max |achieved - product of bounds| " + sci(worst) + " (tol 1e-8), " +
                             std::to_string(failures) + "/200 states outside tolerance, median relative error " +
                             sci(relative[relative.size() / 2])};
}

Verdict measurement_law() {
  std::mt19937_64 rng(606);
  double law_err = 0.0, excess = -1.0, oracle_excess = -1.0;
  const double step = std::numbers::pi / 2 / 49.0;
  for (int n = 0; n < 20; ++n) {
    const TwoQubitState s = entangled_sample(rng, 0.01);
    const double c = concurrence(s).concurrence;
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double theta = std::min(i * step, std::numbers::pi / 2);
        const double phi = std::min(j * step, std::numbers::pi / 2);
        const double ec = expected_concurrence(s, DichotomicMeasurement::from_angles(theta, phi), Side::Alice);
        law_err = std::max(law_err, std::abs(ec - c * std::cos(theta - phi)));
        excess = std::max(excess, ec - c);
      }
    }
    oracle_excess = std::max(oracle_excess, random_search_measurement(s, 10000, rng()) - c);
  }
  const bool ok = law_err <= 1e-9 && excess <= 1e-10 && oracle_excess <= 1e-10;
  return {ok, "|EC - C cos| " + sci(law_err) + " (tol 1e-9), max EC - C " + sci(excess) +
                  " (tol 1e-10), oracle max EC - C " + sci(oracle_excess)};
}

Verdict inverse_sqrt() {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  int states = 0;
  while (states < 500) {
    const TwoQubitState s = random_state(rng());
    const Vec3& av = s.alice_bloch();
    const double a = norm(av);
    if (a <= 0.01 || a >= 0.99) continue;
    ++states;
    // rho_A^{-1/2} from the spectral projectors (I +- a_hat . sigma) / 2.
    Mat2 dir;
    for (int j = 1; j <= 3; ++j) dir += pauli(j) * (av[j - 1] / a);
    const Mat2 plus = (Mat2::identity() + dir) * 0.5, minus = (Mat2::identity() - dir) * 0.5;
    const Mat2 inv_sqrt = plus * (1.0 / std::sqrt((1 + a) / 2)) + minus * (1.0 / std::sqrt((1 - a) / 2));
    const Mat2 expected = inv_sqrt * std::sqrt((1 - a) / 2);
    worst = std::max(worst, max_abs_diff(optimal_filter(av, Side::Alice).matrix(), expected));
  }
  return {worst <= 1e-10, "500 states, max entrywise error " + sci(worst) + " (tol 1e-10)"};
}

Verdict sweep_reproduction() {
  const auto path = std::filesystem::temp_directory_path() / "qfilter_acceptance_sweep.csv";
  std::ostringstream out, err;
  const int code = cli::run_cli({"sweep", "--min", "0", "--max", "0.99", "--steps", "100", "--out", path.string()},
                                out, err);
  if (code != 0) return {false, "sweep exited with " + std::to_string(code) + ": " + err.str()};
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (line != "a,ratio,gain,probability") return {false, "unexpected header '" + line + "'"};
  std::vector<std::array<double, 4>> rows;
  std::string first_row;
  while (std::getline(in, line)) {
    if (rows.empty()) first_row = line;
    std::array<double, 4> r{};
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    char comma;
    fields >> r[0] >> comma >> r[1] >> comma >> r[2] >> comma >> r[3];
    rows.push_back(r);
  }
  std::filesystem::remove(path);
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    monotone = monotone && rows[i][1] > rows[i - 1][1] && rows[i][2] > rows[i - 1][2] && rows[i][3] < rows[i - 1][3];
  }
  const bool endpoint = first_row == "0,1,0,1";
  const bool ok = rows.size() == 100 && monotone && endpoint;
  return {ok, std::to_string(rows.size()) + " rows, monotone " + (monotone ? "yes" : "no") + ", first row '" +
                  first_row + "'"};
}

Verdict dual_pipeline() {
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const TwoQubitState s = random_state(rng());
    const auto root = concurrence_spectrum_root_form(s);
    const auto product = concurrence_spectrum_product_form(s);
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(root[k] - product[k]));
  }
  return {worst <= 1e-7, "1000 states, max spectrum difference " + sci(worst) + " (tol 1e-7)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "concurrence golden values", 1.0, concurrence_golden},
      {2, "transformation law", 10.0, transformation_law},
      {3, "optimal filter attains bound", 10.0, optimal_attainment},
      {4, "grid search respects bound", 60.0, bound_validity},
      {5, "two-sided sequential ratio", 5.0, two_sided},
      {6, "measurement expectation law", 60.0, measurement_law},
      {7, "optimal filter proportional to inverse sqrt marginal", 5.0, inverse_sqrt},
      {8, "sweep curve reproduction", 1.0, sweep_reproduction},
      {9, "dual-pipeline spectrum agreement", 10.0, dual_pipeline},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all_ok = true;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.budget_seconds;
    const bool ok = v.ok && in_time;
    all_ok = all_ok && ok;
    std::printf("[%s] %d %s: %s; %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                v.detail.c_str(), elapsed, c.budget_seconds, in_time ? "" : " TIME EXCEEDED");
  }
  return all_ok ? 0 : 1;
}
