#pragma once

// Brute-force certification of the closed-form filtering results. Every
// candidate is evaluated by evolving the full state and recomputing its
// concurrence; none of the closed-form ratio or probability expressions are
// used to rank candidates.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qfilter/filtering.hpp"
#include "qfilter/measurement.hpp"

namespace qfilter {

struct SearchResult {
  FilterOperator best_filter;
  double best_ratio;
  double best_probability;
  std::size_t samples_evaluated;
  double gap_to_bound;  ///< ratio_upper_bound(|a|) - best_ratio
};

/// `count` quasi-uniform unit vectors on a Fibonacci lattice.
std::vector<Vec3> fibonacci_sphere(std::size_t count);

/// Grid over omega = |x| / x0 in {i / resolution : 0 <= i < resolution} and
/// x-directions on a Fibonacci mesh of 2 * resolution points plus the two
/// directions +-a/|a|. x0 is set to 2 / (1 + omega), the largest admissible
/// value. Ties are broken by higher probability, then lexicographically on
/// (x0, x1, x2, x3). Requires resolution >= 8 and |a| < 1.
SearchResult grid_search_optimal_filter(const TwoQubitState& s, int resolution, Side side = Side::Alice);

/// Maximum expected concurrence over `samples` random measurements with
/// theta, phi uniform on [0, pi/2] and a Haar-random basis.
double random_search_measurement(const TwoQubitState& s, std::size_t samples, std::uint64_t seed,
                                 Side side = Side::Alice);

/// The concurrence ratio a filter actually achieved: C_after / C_before when
/// the input is entangled (C_before >= 1e-6), otherwise the determinant over
/// probability of the realized matrices.
double achieved_ratio(const FilterOutcome& outcome);

}  // namespace qfilter
