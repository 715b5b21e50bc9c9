#pragma once

#include <cstddef>

namespace calband::tol {

// Primal feasibility of LP solutions, relative to (1 + row norm).
inline constexpr double kFeasibility = 1e-9;
// Slack of the l1-ball projection.
inline constexpr double kProjection = 1e-12;
// Pivot magnitude below which a tableau entry is treated as zero.
inline constexpr double kPivot = 1e-9;
// Reduced costs above -kOptimality count as non-improving.
inline constexpr double kOptimality = 1e-9;
// Blackwell step: optimal slack above this is an approachability violation.
inline constexpr double kApproachability = 1e-6;
// Forecast distributions sum to one within this.
inline constexpr double kDistribution = 1e-12;

// Largest simplex lattice simplex_grid() will materialize.
inline constexpr std::size_t kDefaultGridCap = 2'000'000;
// Largest joint-profile space enumerated by SC and the CE metric.
inline constexpr std::size_t kDefaultProfileCap = 65'536;

}  // namespace calband::tol
