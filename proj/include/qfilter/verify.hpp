#pragma once

// Seeded property suites behind `qfilter verify`. Each suite draws its own
// deterministic stream of cases from (seed, suite index, trial index), so
// results do not depend on which other suites run.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qfilter {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  /// Worst failing case, serialized for replay.
  std::optional<nlohmann::json> failing_case;
};

std::vector<std::string> verification_suite_names();

/// Runs every suite. Expensive searches (grid search, measurement search)
/// use min(trials, small cap) cases.
std::vector<SuiteResult> run_verification(std::uint64_t seed, std::size_t trials);

/// Counter-based seed derivation (splitmix64 finalizer over the inputs).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace qfilter
