#pragma once

// Expected reward f_k(m, d) for every player, arm and opponent profile,
// estimated once per run by Monte Carlo. Evaluation and SC only.

#include <cstdint>
#include <vector>

#include "calband/env.hpp"

namespace calband {

class OracleTable {
public:
    OracleTable() = default;
    OracleTable(std::size_t players, std::size_t arms);

    double at(std::size_t player, Arm arm, std::size_t opponents) const {
        return means_[(player * arms_ + arm) * outcomes_ + opponents];
    }
    double& at(std::size_t player, Arm arm, std::size_t opponents) {
        return means_[(player * arms_ + arm) * outcomes_ + opponents];
    }
    double std_error(std::size_t player, Arm arm, std::size_t opponents) const {
        return errors_[(player * arms_ + arm) * outcomes_ + opponents];
    }
    /// max_m f_k(m, d)
    double best(std::size_t player, std::size_t opponents) const;
    /// f_k evaluated at player k's component of a joint profile.
    double payoff(std::size_t player, const JointProfile& profile) const;

    std::size_t players() const noexcept { return players_; }
    std::size_t arms() const noexcept { return arms_; }
    std::size_t outcomes() const noexcept { return outcomes_; }

private:
    friend OracleTable compute_oracle_table(const RadioConfig&, std::size_t, std::uint64_t);
    std::size_t players_ = 0, arms_ = 0, outcomes_ = 0;
    std::vector<double> means_;
    std::vector<double> errors_;
};

/// One expected_reward_oracle call per cell with the given sample count.
/// Cells of one player share the seed (common random numbers), which keeps
/// comparisons between arms low-variance and makes symmetric cells exactly equal.
OracleTable compute_oracle_table(const RadioConfig& cfg, std::size_t n_samples, std::uint64_t seed);

}  // namespace calband
