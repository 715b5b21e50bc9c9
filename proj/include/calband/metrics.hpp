#pragma once

// Post-processing of a RunTrace against the oracle table.

#include <cstddef>
#include <vector>

#include "calband/game.hpp"
#include "calband/oracle.hpp"

namespace calband {

struct ConsistencyPoint {
    std::size_t horizon = 0;
    std::vector<double> S;       // per player
    std::vector<double> regret;  // per player, (1/T) sum (f - f*) <= 0
    std::vector<double> numerator;
    std::vector<double> denominator;
};

/// Cumulative S and per-round regret at each checkpoint (checkpoints beyond the
/// trace are dropped). Throws Error{DegenerateDenominator} when sum f* = 0.
std::vector<ConsistencyPoint> consistency_series(const RunTrace& trace, const OracleTable& oracle,
                                                 const std::vector<std::size_t>& checkpoints);

/// Normalized joint-profile counts over trials [begin, end). Throws Error{EmptyWindow}.
Vector empirical_frequencies(const RunTrace& trace, std::size_t begin, std::size_t end);

struct CeProjection {
    double distance = 0.0;
    Vector pi;  // a nearest correlated equilibrium
};

/// min over correlated equilibria pi of ||pi_hat - pi||_1, with a minimizer.
/// Throws Error{NumericalBreakdown} if the program does not solve.
CeProjection nearest_correlated_equilibrium(std::span<const double> pi_hat, const OracleTable& oracle);
double ce_distance(std::span<const double> pi_hat, const OracleTable& oracle);

/// Largest violation of the CE inequalities by pi (0 when pi is a CE).
double ce_violation(std::span<const double> pi, const OracleTable& oracle);

struct CalibrationRow {
    std::size_t sequence = 0;
    unsigned r = 0;
    double eps = 0.0;
    std::size_t length = 0;
    double score = 0.0;
};

/// Block l1 calibration sum at the end of every completed forecaster period.
std::vector<CalibrationRow> calibration_scores(const RunTrace& trace, std::size_t player);

/// Same computation on bare sequences of forecasts and outcomes.
struct CalibrationAccumulator {
    explicit CalibrationAccumulator(std::size_t outcomes) : outcomes(outcomes) {}
    void add(std::size_t sequence, unsigned r, const LatticePoint& point, std::size_t outcome);
    std::vector<CalibrationRow> rows;

    std::size_t outcomes;
    std::size_t current = static_cast<std::size_t>(-1);
    unsigned current_r = 0;
    std::size_t count = 0;
    std::vector<std::pair<LatticePoint, Vector>> blocks;
};

/// sum over players of (1/T) sum_t reward, at each checkpoint.
std::vector<double> aggregate_throughput(const RunTrace& trace, const std::vector<std::size_t>& checkpoints);

struct ExplorationStats {
    std::size_t exploration_trials = 0;
    std::vector<std::size_t> random_pulls;  // per arm, explore-random only
};
ExplorationStats exploration_stats(const RunTrace& trace, std::size_t player, std::size_t end);

/// Visit count of every joint profile over the first `end` trials.
std::vector<std::size_t> joint_visits(const RunTrace& trace, std::size_t end);

// Reference curves.
double forecaster_rate_bound(std::size_t outcomes, double T);  // D sqrt(ln T) / T^(1/(D+1))
double regression_rate(double n, double smoothness, double dimension);  // (log n / n)^(p/(2p+d))
double expected_profile_samples(unsigned R, double gamma, std::size_t arms, std::size_t players);

/// Geometric checkpoints 2^lo..2^hi plus `horizon` itself.
std::vector<std::size_t> geometric_checkpoints(std::size_t horizon, unsigned lo = 6);

}  // namespace calband
