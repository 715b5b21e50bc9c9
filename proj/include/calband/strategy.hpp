#pragma once

// The bandit selection strategy: a doubling period schedule with r random
// exploration trials in period r, a tabular reward estimator indexed by
// (arm, opponent profile), and best response to the forecast.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "calband/lp.hpp"
#include "calband/profile.hpp"
#include "calband/rng.hpp"

namespace calband {

struct ScheduleParams {
    /// Probability of best response inside an exploration trial.
    double gamma = 0.05;

    bool operator==(const ScheduleParams&) const = default;
};

/// T'_r = 2^r.
std::size_t schedule_period_length(unsigned r);
/// ceil(T'_r * Z_r) with Z_r = r / 2^r.
std::size_t exploration_count(unsigned r);
/// sum_{i<=R} ceil(T'_i Z_i) / sum_{i<=R} T'_i.
double cumulative_exploration_fraction(unsigned R);

/// exploration_count(r) distinct trial offsets in [0, 2^r), sorted ascending.
std::vector<std::size_t> build_period_schedule(unsigned r, Rng& rng);

class EstimatorTable {
public:
    EstimatorTable(std::size_t arms, std::size_t outcomes);

    void update(Arm arm, std::size_t outcome, double reward);

    double mean(Arm arm, std::size_t outcome) const { return means_[arm * outcomes_ + outcome]; }
    std::uint64_t count(Arm arm, std::size_t outcome) const { return counts_[arm * outcomes_ + outcome]; }
    bool visited(Arm arm, std::size_t outcome) const { return count(arm, outcome) > 0; }
    std::size_t arms() const noexcept { return arms_; }
    std::size_t outcomes() const noexcept { return outcomes_; }
    void scale(double factor);

private:
    std::size_t arms_;
    std::size_t outcomes_;
    std::vector<double> means_;
    std::vector<std::uint64_t> counts_;
};

/// argmax_m sum_d forecast[d] * mean(m, d); ties go to the lowest arm.
/// Throws Error{DimensionMismatch} when the forecast length is not D.
Arm best_response(const EstimatorTable& table, std::span<const double> forecast);

enum class TrialKind { Explore, Exploit };

enum class Phase : std::uint8_t {
    ExploreRandom,  // uniform arm inside an exploration trial
    ExploreBest,    // best response inside an exploration trial
    Exploit,
    Baseline,       // played by a non-schedule strategy
};

const char* to_string(Phase phase);

struct Selection {
    Arm arm = 0;
    Phase phase = Phase::Exploit;
};

Selection select_action(const EstimatorTable& table, TrialKind kind, std::span<const double> forecast, double gamma,
                        Rng& rng);

/// Period position of the schedule. The exploration offsets are drawn once per
/// period from the supplied stream.
class ScheduleClock {
public:
    /// Kind of the current trial; draws the period's offsets on its first trial.
    TrialKind current(Rng& rng);
    /// Moves past the current trial.
    void advance();

    unsigned period() const noexcept { return r_; }
    std::size_t offset() const noexcept { return t_; }
    const std::vector<std::size_t>& exploration_offsets() const noexcept { return offsets_; }

private:
    unsigned r_ = 1;
    std::size_t t_ = 0;
    bool drawn_ = false;
    std::vector<std::size_t> offsets_;
};

}  // namespace calband
