#include "calband/baselines.hpp"

#include <algorithm>

#include "calband/error.hpp"

namespace calband {

Arm ur_select(std::size_t arms, Rng& rng) { return uniform_index(rng, arms); }

RewardOutcome ncb_reward_filter(const RewardOutcome& outcome, const JointProfile& profile) {
    RewardOutcome out = outcome;
    for (std::size_t k = 0; k < profile.size(); ++k) {
        if (out.occupancy[profile[k]] > 1) out.throughput[k] = 0.0;
    }
    return out;
}

std::size_t argmax_random_tie(std::span<const double> scores, Rng& rng) {
    const double best = *std::max_element(scores.begin(), scores.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] == best) ties.push_back(i);
    }
    return ties.size() == 1 ? ties[0] : ties[uniform_index(rng, ties.size())];
}

AvailabilityState::AvailabilityState(std::size_t arms)
    : successes(arms, 0.0), visits(arms, 0.0), others_last(arms, 0.0) {}

double AvailabilityState::availability(Arm m) const { return visits[m] > 0.0 ? successes[m] / visits[m] : 1.0; }

double AvailabilityState::score(Arm m) const { return availability(m) / (1.0 + others_last[m]); }

void AvailabilityState::record(Arm m, bool available) {
    visits[m] += 1.0;
    successes[m] += available ? 1.0 : 0.0;
}

UniformRandomAgent::UniformRandomAgent(std::size_t player, std::size_t arms, std::uint64_t seed)
    : arms_(arms), rng_(make_stream(seed, Stream::Baseline, static_cast<std::uint32_t>(player))) {}

Decision UniformRandomAgent::decide(TrialKind) { return {ur_select(arms_, rng_), Phase::Baseline, std::nullopt}; }

AvailabilityAgent::AvailabilityAgent(std::size_t player, std::size_t arms, std::uint64_t seed)
    : player_(player), state_(arms), rng_(make_stream(seed, Stream::Baseline, static_cast<std::uint32_t>(player))) {}

Decision AvailabilityAgent::decide(TrialKind) {
    std::vector<double> scores(state_.visits.size());
    for (Arm m = 0; m < scores.size(); ++m) scores[m] = state_.score(m);
    last_arm_ = argmax_random_tie(scores, rng_);
    return {last_arm_, Phase::Baseline, std::nullopt};
}

void AvailabilityAgent::observe(const Observation& obs) {
    state_.record(last_arm_, obs.channel_available);
    std::fill(state_.others_last.begin(), state_.others_last.end(), 0.0);
    for (std::size_t l = 0; l < obs.profile.size(); ++l) {
        if (l != player_) state_.others_last[obs.profile[l]] += 1.0;
    }
}

void gql_update(std::vector<double>& q, std::size_t states, Arm arm, std::size_t state, double alpha, double reward) {
    double& cell = q[arm * states + state];
    cell = (1.0 - alpha) * cell + alpha * reward;
}

QLearningAgent::QLearningAgent(std::size_t player, std::size_t players, std::size_t arms, QLearningParams params,
                               std::uint64_t seed)
    : player_(player),
      arms_(arms),
      states_(opponent_profile_count(players, arms)),
      params_(params),
      q_(arms * states_, 0.0),
      rng_(make_stream(seed, Stream::Baseline, static_cast<std::uint32_t>(player))) {
    if (!(params.epsilon >= 0.0 && params.epsilon <= 1.0)) throw Error(ErrorCode::ConfigInvalid, "gql.epsilon");
    if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw Error(ErrorCode::ConfigInvalid, "gql.alpha");
}

Decision QLearningAgent::decide(TrialKind) {
    if (uniform01(rng_) < params_.epsilon) {
        last_arm_ = ur_select(arms_, rng_);
    } else {
        std::vector<double> column(arms_);
        for (Arm m = 0; m < arms_; ++m) column[m] = q(m, state_);
        last_arm_ = argmax_random_tie(column, rng_);
    }
    return {last_arm_, Phase::Baseline, std::nullopt};
}

void QLearningAgent::observe(const Observation& obs) {
    gql_update(q_, states_, last_arm_, state_, params_.alpha, obs.reward);
    state_ = encode_opponents(obs.profile, player_, arms_);
}

JointProfile sc_assign(const OracleTable& oracle, std::size_t cap) {
    const std::size_t K = oracle.players(), M = oracle.arms();
    const std::size_t count = checked_power(M, K, cap);
    JointProfile best;
    double best_value = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
        const JointProfile p = decode_joint(i, K, M);
        double value = 0.0;
        for (std::size_t k = 0; k < K; ++k) value += oracle.payoff(k, p);
        if (value > best_value) {
            best_value = value;
            best = p;
        }
    }
    return best;
}

}  // namespace calband
