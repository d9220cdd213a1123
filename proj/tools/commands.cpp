#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qfilter/entanglement.hpp"
#include "qfilter/filtering.hpp"
#include "qfilter/io.hpp"
#include "qfilter/measurement.hpp"
#include "qfilter/verify.hpp"

namespace qfilter::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adding 0.0 turns -0 into 0.
std::string num(double v) { return fmt::format("{:.12g}", v + 0.0); }

std::string vec(const Vec3& v) { return fmt::format("({}, {}, {})", num(v[0]), num(v[1]), num(v[2])); }

std::string cnum(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  return fmt::format("{}{}{}i", num(z.real()), z.imag() < 0 ? "-" : "+", num(std::abs(z.imag())));
}

void print_matrix(std::ostream& out, const Mat2& m, const std::string& indent) {
  for (std::size_t i = 0; i < 2; ++i) fmt::print(out, "{}[{}, {}]\n", indent, cnum(m(i, 0)), cnum(m(i, 1)));
}

struct SidePrediction {
  double a;
  double purity;
  std::optional<double> ratio;
  std::optional<double> probability;
};

SidePrediction predict(const TwoQubitState& s, Side side) {
  const double a = norm(s.bloch(side));
  SidePrediction p{a, s.reduced_state(side).purity(), std::nullopt, std::nullopt};
  if (a < 1.0) {
    p.ratio = ratio_upper_bound(a);
    p.probability = optimal_success_probability(a);
  }
  return p;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int cmd_analyze(const std::string& path, bool as_json, std::ostream& out) {
  const TwoQubitState s = state_from_json(read_json_file(path));
  const ConcurrenceReport r = concurrence(s);
  const SidePrediction pa = predict(s, Side::Alice);
  const SidePrediction pb = predict(s, Side::Bob);

  if (as_json) {
    auto side_json = [](const SidePrediction& p) {
      return json{{"bloch_length", p.a},
                  {"purity", p.purity},
                  {"optimal_ratio", optional_json(p.ratio)},
                  {"optimal_probability", optional_json(p.probability)}};
    };
    const json doc{{"concurrence", r.concurrence},
                   {"eof", r.eof},
                   {"lambdas", r.lambdas},
                   {"a", s.alice_bloch()},
                   {"b", s.bob_bloch()},
                   {"T", s.correlations()},
                   {"alice", side_json(pa)},
                   {"bob", side_json(pb)}};
    out << doc.dump(2) << '\n';
    return kOk;
  }

  fmt::print(out, "concurrence: {}\n", num(r.concurrence));
  fmt::print(out, "eof: {}\n", num(r.eof));
  fmt::print(out, "lambdas: {}, {}, {}, {}\n", num(r.lambdas[0]), num(r.lambdas[1]), num(r.lambdas[2]),
             num(r.lambdas[3]));
  fmt::print(out, "a: {}\n", vec(s.alice_bloch()));
  fmt::print(out, "b: {}\n", vec(s.bob_bloch()));
  fmt::print(out, "T:\n");
  for (const Vec3& row : s.correlations()) fmt::print(out, "  {}\n", vec(row));
  for (const auto& [label, p] : {std::pair{"A", pa}, std::pair{"B", pb}}) {
    fmt::print(out, "side {}: |bloch| = {}, purity = {}", label, num(p.a), num(p.purity));
    if (p.ratio) {
      fmt::print(out, ", optimal ratio = {}, optimal probability = {}\n", num(*p.ratio), num(*p.probability));
    } else {
      fmt::print(out, ", pure marginal (no optimal filter)\n");
    }
  }
  return kOk;
}

int cmd_optimal_filter(const std::string& path, const std::string& side_text, const std::string& out_path,
                       std::ostream& out) {
  const Side side = parse_side(side_text);
  const TwoQubitState s = state_from_json(read_json_file(path));
  const double a = norm(s.bloch(side));
  const FilterOperator f = optimal_filter(s.bloch(side), side);
  fmt::print(out, "side: {}\n", side_label(side));
  fmt::print(out, "x0: {}\n", num(f.x0()));
  fmt::print(out, "x: {}\n", vec(f.x()));
  fmt::print(out, "matrix:\n");
  print_matrix(out, f.matrix(), "  ");
  fmt::print(out, "predicted ratio: {}\n", num(ratio_upper_bound(a)));
  fmt::print(out, "predicted probability: {}\n", num(optimal_success_probability(a)));
  if (!out_path.empty()) write_json_file(out_path, filter_to_json(f));
  return kOk;
}

int cmd_apply(const std::string& state_path, const std::string& filter_path, const std::string& out_path,
              std::ostream& out) {
  const TwoQubitState s = state_from_json(read_json_file(state_path));
  const FilterOperator f = filter_from_json(read_json_file(filter_path));
  const FilterOutcome r = apply_filter(s, f);
  fmt::print(out, "probability: {}\n", num(r.probability));
  fmt::print(out, "concurrence before: {}\n", num(r.concurrence_before));
  fmt::print(out, "concurrence after: {}\n", num(r.concurrence_after));
  if (r.concurrence_before > 0.0) {
    fmt::print(out, "achieved ratio: {}\n", num(r.concurrence_after / r.concurrence_before));
  } else {
    fmt::print(out, "achieved ratio: undefined (separable input)\n");
  }
  fmt::print(out, "predicted ratio: {}\n", num(r.ratio));
  if (!out_path.empty()) write_json_file(out_path, state_to_json(r.post_state));
  return kOk;
}

int cmd_sweep(double a_min, double a_max, int steps, const std::string& out_path, std::ostream& out) {
  if (!(a_min >= 0.0 && a_min < a_max && a_max < 1.0)) {
    throw UsageError(fmt::format("sweep: need 0 <= min < max < 1, got min = {}, max = {}", num(a_min), num(a_max)));
  }
  if (steps < 2) throw UsageError(fmt::format("sweep: need steps >= 2, got {}", steps));

  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw FormatError("cannot write " + out_path);
  file << "a,ratio,gain,probability\n";
  const double step = (a_max - a_min) / static_cast<double>(steps - 1);
  for (int i = 0; i < steps; ++i) {
    const double a = i == steps - 1 ? a_max : a_min + step * static_cast<double>(i);
    const double ratio = ratio_upper_bound(a);
    file << fmt::format("{:.15g},{:.15g},{:.15g},{:.15g}\n", a, ratio, ratio - 1.0, optimal_success_probability(a));
  }
  if (!file) throw FormatError("cannot write " + out_path);
  fmt::print(out, "wrote {} rows to {}\n", steps, out_path);
  return kOk;
}

int cmd_verify(std::uint64_t seed, std::size_t trials, std::ostream& out, std::ostream& err) {
  if (trials < 1) throw UsageError("verify: need trials >= 1");
  bool all = true;
  for (const SuiteResult& r : run_verification(seed, trials)) {
    fmt::print(out, "{} {} cases={} worst={} tol={}\n", r.passed ? "PASS" : "FAIL", r.name, r.cases,
               fmt::format("{:.3e}", r.worst_residual), fmt::format("{:.0e}", r.tolerance));
    if (!r.passed) {
      all = false;
      if (r.failing_case) fmt::print(out, "  replay: {}\n", r.failing_case->dump());
    }
  }
  if (!all) {
    fmt::print(err, "verify: one or more suites failed\n");
    return kFailure;
  }
  return kOk;
}

int cmd_random(std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  const TwoQubitState s = random_state(seed);
  write_json_file(out_path, state_to_json(s));
  fmt::print(out, "wrote random state (seed {}) to {}\n", seed, out_path);
  return kOk;
}

int cmd_measure(const std::string& state_path, const std::string& measurement_path, const std::string& side_text,
                std::ostream& out) {
  const Side side = parse_side(side_text);
  const TwoQubitState s = state_from_json(read_json_file(state_path));
  const DichotomicMeasurement m = measurement_from_json(read_json_file(measurement_path));
  const double c = concurrence(s).concurrence;
  fmt::print(out, "concurrence: {}\n", num(c));
  fmt::print(out, "expected concurrence: {}\n", num(expected_concurrence(s, m, side)));
  fmt::print(out, "C cos(theta - phi): {}\n", num(c * m.determinant_sum()));
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local filtering of two-qubit entanglement", "qfilter"};
  app.require_subcommand(1);

  std::string state_path, second_path, out_path, side = "A";
  bool as_json = false;
  double a_min = 0.0, a_max = 0.0;
  int steps = 0;
  std::uint64_t seed = 42;
  std::size_t trials = 1000;

  auto* analyze = app.add_subcommand("analyze", "Concurrence, Pauli coordinates and filter predictions");
  analyze->add_option("state", state_path, "State file")->required();
  analyze->add_flag("--json", as_json, "Machine-readable output");

  auto* optimal = app.add_subcommand("optimal-filter", "Optimal single-side filter for a state");
  optimal->add_option("state", state_path, "State file")->required();
  optimal->add_option("--side", side, "A or B")->required();
  optimal->add_option("--out", out_path, "Write the filter file");

  auto* apply = app.add_subcommand("apply", "Apply a filter to a state");
  apply->add_option("state", state_path, "State file")->required();
  apply->add_option("filter", second_path, "Filter file")->required();
  apply->add_option("--out", out_path, "Write the post-filter state");

  auto* sweep = app.add_subcommand("sweep", "Optimal ratio and probability versus Bloch length, as CSV");
  sweep->add_option("--min", a_min, "Smallest Bloch length")->required();
  sweep->add_option("--max", a_max, "Largest Bloch length")->required();
  sweep->add_option("--steps", steps, "Number of rows")->required();
  sweep->add_option("--out", out_path, "CSV file")->required();

  auto* verify = app.add_subcommand("verify", "Run the seeded property suites");
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--trials", trials, "Cases per suite");

  auto* random = app.add_subcommand("random", "Write a seeded random state");
  random->add_option("--seed", seed, "Seed")->required();
  random->add_option("--out", out_path, "State file")->required();

  auto* measure = app.add_subcommand("measure", "Expected concurrence after a two-outcome measurement");
  measure->add_option("state", state_path, "State file")->required();
  measure->add_option("measurement", second_path, "Measurement file")->required();
  measure->add_option("--side", side, "A or B");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(state_path, as_json, out);
    if (*optimal) return cmd_optimal_filter(state_path, side, out_path, out);
    if (*apply) return cmd_apply(state_path, second_path, out_path, out);
    if (*sweep) return cmd_sweep(a_min, a_max, steps, out_path, out);
    if (*verify) return cmd_verify(seed, trials, out, err);
    if (*random) return cmd_random(seed, out_path, out);
    if (*measure) return cmd_measure(state_path, second_path, side, out);
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
  return kUsage;
}

}  // namespace qfilter::cli
