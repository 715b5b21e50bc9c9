#pragma once

// Comparison strategies: uniform random (UR), availability-based (AB),
// epsilon-greedy Q-learning (GQL), the no-collision-reward variant of the
// calibrated bandit (NCB, via ncb_reward_filter) and the statistical
// centralized assignment (SC).

#include <vector>

#include "calband/agent.hpp"
#include "calband/oracle.hpp"

namespace calband {

Arm ur_select(std::size_t arms, Rng& rng);

/// Zeroes the reward of every player that shares its channel.
RewardOutcome ncb_reward_filter(const RewardOutcome& outcome, const JointProfile& profile);

/// Index of a maximal entry, ties broken uniformly at random.
std::size_t argmax_random_tie(std::span<const double> scores, Rng& rng);

struct AvailabilityState {
    explicit AvailabilityState(std::size_t arms);
    /// Estimated availability; 1 before the first visit.
    double availability(Arm m) const;
    /// availability(m) / (1 + channel users other than this player on the last trial).
    double score(Arm m) const;
    void record(Arm m, bool available);

    std::vector<double> successes;
    std::vector<double> visits;
    std::vector<double> others_last;
};

class UniformRandomAgent final : public Agent {
public:
    UniformRandomAgent(std::size_t player, std::size_t arms, std::uint64_t seed);
    Decision decide(TrialKind) override;
    void observe(const Observation&) override {}

private:
    std::size_t arms_;
    Rng rng_;
};

class AvailabilityAgent final : public Agent {
public:
    AvailabilityAgent(std::size_t player, std::size_t arms, std::uint64_t seed);
    Decision decide(TrialKind) override;
    void observe(const Observation& obs) override;
    const AvailabilityState& state() const noexcept { return state_; }

private:
    std::size_t player_;
    AvailabilityState state_;
    Rng rng_;
    Arm last_arm_ = 0;
};

struct QLearningParams {
    double epsilon = 0.1;
    double alpha = 0.1;
    bool operator==(const QLearningParams&) const = default;
};

/// Q[m][s] <- (1 - alpha) Q[m][s] + alpha * reward
void gql_update(std::vector<double>& q, std::size_t states, Arm arm, std::size_t state, double alpha, double reward);

class QLearningAgent final : public Agent {
public:
    /// State = encoded opponent profile of the previous trial (0 before the first).
    QLearningAgent(std::size_t player, std::size_t players, std::size_t arms, QLearningParams params,
                   std::uint64_t seed);
    Decision decide(TrialKind) override;
    void observe(const Observation& obs) override;
    double q(Arm m, std::size_t state) const { return q_[m * states_ + state]; }

private:
    std::size_t player_, arms_, states_;
    QLearningParams params_;
    std::vector<double> q_;
    std::size_t state_ = 0;
    Arm last_arm_ = 0;
    Rng rng_;
};

/// Joint profile maximizing sum_k f_k over all M^K profiles; ties go to the
/// lexicographically first profile. Throws Error{GridTooLarge} above `cap`.
JointProfile sc_assign(const OracleTable& oracle, std::size_t cap = tol::kDefaultProfileCap);

class StaticAgent final : public Agent {
public:
    explicit StaticAgent(Arm arm) : arm_(arm) {}
    Decision decide(TrialKind) override { return {arm_, Phase::Baseline, std::nullopt}; }
    void observe(const Observation&) override {}

private:
    Arm arm_;
};

}  // namespace calband
