#pragma once

// Calibrated forecaster over the D joint profiles of a player's opponents.
//
// Time is split into doubling periods T_r = 2^r. Within period r forecasts are
// restricted to the simplex lattice covering the D-simplex at l1 radius
// eps_r = 2^(-r/(D+1)); the mixed strategy over lattice points is chosen each
// trial by a Blackwell approachability step that pushes the running regret
// vector toward the eps_r-ball. A period whose final regret leaves the ball
// restarts the schedule at r = 1 unless options say otherwise.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "calband/lp.hpp"
#include "calband/rng.hpp"

namespace calband {

enum class LatticeMode {
    Auto,      // explicit while the lattice fits under explicit_cap, else implicit
    Explicit,  // materialize every lattice point; GridTooLarge above grid_cap
    Implicit,  // track only points that have been forecast or carried over
};

/// What happens when a period ends with ||u^(r)||_1 > eps_r.
enum class PeriodFailure {
    Reset,    // restart the schedule at r = 1
    Retry,    // run period r again
    Advance,  // continue to r + 1 regardless
};

/// How blackwell_strategy picks among admissible mixed strategies.
enum class BlackwellObjective {
    MinSlack,         // minimize the largest constraint slack
    FewestNewPoints,  // slack <= 0, least weight on the zero-regret column
};

struct ForecasterOptions {
    LatticeMode mode = LatticeMode::Auto;
    PeriodFailure on_failure = PeriodFailure::Reset;
    BlackwellObjective objective = BlackwellObjective::FewestNewPoints;
    std::size_t explicit_cap = 20'000;
    std::size_t grid_cap = tol::kDefaultGridCap;
    /// Share of the carried-over strategy when a new period starts; the rest is uniform.
    double carry_weight = 0.9;

    bool operator==(const ForecasterOptions&) const = default;
};

struct Forecast {
    Vector distribution;  // over the D opponent profiles
    std::size_t grid_index = 0;
    LatticePoint point;   // integer counts; distribution = point / resolution
};

struct BlackwellResult {
    /// Weight per input column, followed by the weight of the aggregated
    /// zero-regret column when one was offered.
    Vector weights;
    /// max_d sum_q psi_q (L_q.p_q - L_{q,d}) - L.Pi(u); <= 0 when approachable.
    double slack = 0.0;
    /// True when u already lies in the target ball (no constraint binds).
    bool inside = false;
};

/// One approachability step. `points[q]` is the forecast of column q and
/// `blocks[q]` its block of the averaged regret vector; `zero_column` adds one
/// more column whose regret block is zero (any not-yet-used lattice point).
///
/// FewestNewPoints falls back to MinSlack when its program is infeasible.
/// Throws Error{ApproachabilityViolated} when the optimal slack exceeds
/// tol::kApproachability.
BlackwellResult blackwell_strategy(const std::vector<Vector>& points, const std::vector<Vector>& blocks, double eps,
                                   bool zero_column,
                                   BlackwellObjective objective = BlackwellObjective::MinSlack);

/// Per-period record.
struct PeriodTelemetry {
    std::size_t sequence = 0;  // 0-based count of periods started
    unsigned r = 1;
    double eps = 1.0;
    std::size_t length = 0;
    double regret_norm = 0.0;  // ||u^(r)||_1 at period end
    bool reset = false;
    double max_slack = 0.0;
    std::size_t lp_solves = 0;
    double grid_size = 0.0;    // N_eps (may be astronomically large)
    std::size_t columns = 0;   // lattice points forecast at least once
};

class Forecaster {
public:
    /// Requires outcomes >= 2. Throws Error{GridTooLarge} in explicit mode when
    /// the first lattice exceeds options.grid_cap.
    explicit Forecaster(std::size_t outcomes, ForecasterOptions options = {});

    /// Samples Q_t from the current mixed strategy.
    Forecast emit(Rng& rng);

    /// Records the realized outcome of the trial whose forecast was last
    /// emitted, then recomputes the mixed strategy for the next trial.
    /// Throws Error{OutcomeOutOfRange}.
    void observe(std::size_t outcome);

    std::size_t outcomes() const noexcept { return outcomes_; }
    unsigned period() const noexcept { return r_; }
    std::size_t period_sequence() const noexcept { return sequence_; }
    std::size_t period_length() const noexcept { return std::size_t{1} << r_; }
    std::size_t trial_in_period() const noexcept { return t_; }
    double eps() const noexcept { return eps_; }
    std::uint32_t resolution() const noexcept { return resolution_; }
    double grid_size() const noexcept { return grid_size_; }
    bool is_explicit() const noexcept { return explicit_; }
    std::size_t resets() const noexcept { return resets_; }

    /// Mixed strategy over columns(); with an explicit lattice this is the full
    /// N_eps vector in canonical lattice order.
    const Vector& psi() const noexcept { return psi_; }
    const std::vector<LatticePoint>& columns() const noexcept { return points_; }

    /// Averaged regret block of column q in the current period.
    Vector regret_block(std::size_t q) const;
    /// ||u_t||_1 over all blocks in the current period.
    double regret_norm() const;

    const std::vector<PeriodTelemetry>& telemetry() const noexcept { return telemetry_; }
    /// Largest Blackwell slack seen so far.
    double max_slack() const noexcept { return max_slack_overall_; }

    /// Replaces the mixed strategy (test hook; must match columns()).
    void set_psi(Vector psi);

    static double period_eps(unsigned r, std::size_t outcomes);

private:
    void start_period(unsigned r);
    std::size_t column_of(const LatticePoint& point);
    std::size_t fresh_column();
    Vector recent_frequencies() const;
    void set_uniform();
    void recompute_psi();

    std::size_t outcomes_;
    ForecasterOptions options_;
    unsigned r_ = 1;
    std::size_t sequence_ = 0;
    std::size_t t_ = 0;
    double eps_ = 1.0;
    std::uint32_t resolution_ = 1;
    double grid_size_ = 0.0;
    bool explicit_ = true;
    std::size_t resets_ = 0;

    std::vector<LatticePoint> points_;
    std::vector<Vector> distributions_;
    std::map<LatticePoint, std::size_t> index_;
    std::vector<double> sums_;      // columns x outcomes, unnormalized regret
    std::vector<std::uint8_t> used_;
    std::vector<std::size_t> used_list_;
    Vector psi_;

    std::vector<double> period_counts_;
    std::vector<double> previous_counts_;

    std::optional<std::size_t> pending_;
    double period_max_slack_ = 0.0;
    std::size_t period_lp_solves_ = 0;
    double max_slack_overall_ = 0.0;
    std::vector<PeriodTelemetry> telemetry_;
};

}  // namespace calband
