#include "calband/game.hpp"

#include <memory>

#include "calband/error.hpp"

namespace calband {

const char* to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::CB: return "CB";
        case StrategyKind::NCB: return "NCB";
        case StrategyKind::GQL: return "GQL";
        case StrategyKind::AB: return "AB";
        case StrategyKind::UR: return "UR";
        case StrategyKind::SC: return "SC";
    }
    return "?";
}

StrategyKind strategy_from_string(const std::string& name) {
    for (auto k : {StrategyKind::CB, StrategyKind::NCB, StrategyKind::GQL, StrategyKind::AB, StrategyKind::UR,
                   StrategyKind::SC}) {
        if (name == to_string(k)) return k;
    }
    throw Error(ErrorCode::ConfigInvalid, "strategies: unknown strategy '" + name + "'");
}

void GameConfig::validate() const {
    radio.validate();
    if (strategies.size() != radio.players) {
        throw Error(ErrorCode::ConfigInvalid, "strategies: expected " + std::to_string(radio.players) + " entries");
    }
    if (horizon < 1) throw Error(ErrorCode::ConfigInvalid, "horizon_trials: must be >= 1");
    if (!(schedule.gamma >= 0.0 && schedule.gamma <= 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "schedule.gamma: must lie in [0, 1]");
    }
    if (oracle_samples < 1) throw Error(ErrorCode::ConfigInvalid, "oracle_samples: must be >= 1");
    for (const auto& s : strategies) {
        if (s.kind != StrategyKind::GQL) continue;
        if (!(s.gql.epsilon > 0.0 && s.gql.epsilon <= 1.0)) {
            throw Error(ErrorCode::ConfigInvalid, "strategies.gql_epsilon: must lie in (0, 1]");
        }
        if (!(s.gql.alpha > 0.0 && s.gql.alpha <= 1.0)) {
            throw Error(ErrorCode::ConfigInvalid, "strategies.gql_alpha: must lie in (0, 1]");
        }
    }
}

RunTrace run_game(const GameConfig& cfg, const OracleTable* oracle) {
    cfg.validate();
    const std::size_t K = cfg.radio.players, M = cfg.radio.channels;
    checked_power(M, K, cfg.profile_cap);

    std::optional<OracleTable> own_oracle;
    std::optional<JointProfile> assignment;
    for (const auto& s : cfg.strategies) {
        if (s.kind != StrategyKind::SC || assignment) continue;
        if (!oracle) {
            own_oracle = compute_oracle_table(cfg.radio, cfg.oracle_samples, cfg.seed);
            oracle = &*own_oracle;
        }
        assignment = sc_assign(*oracle, cfg.profile_cap);
    }

    std::vector<std::unique_ptr<Agent>> agents;
    for (std::size_t k = 0; k < K; ++k) {
        switch (cfg.strategies[k].kind) {
            case StrategyKind::CB:
            case StrategyKind::NCB:
                agents.push_back(
                    std::make_unique<CalibratedBanditAgent>(k, K, M, cfg.schedule, cfg.forecaster, cfg.seed));
                break;
            case StrategyKind::GQL:
                agents.push_back(std::make_unique<QLearningAgent>(k, K, M, cfg.strategies[k].gql, cfg.seed));
                break;
            case StrategyKind::AB: agents.push_back(std::make_unique<AvailabilityAgent>(k, M, cfg.seed)); break;
            case StrategyKind::UR: agents.push_back(std::make_unique<UniformRandomAgent>(k, M, cfg.seed)); break;
            case StrategyKind::SC: agents.push_back(std::make_unique<StaticAgent>((*assignment)[k])); break;
        }
    }

    RunTrace trace;
    trace.players = K;
    trace.arms = M;
    trace.outcomes = opponent_profile_count(K, M);
    trace.seed = cfg.seed;
    for (const auto& s : cfg.strategies) trace.strategies.push_back(s.kind);
    trace.player.resize(K);
    const std::size_t T = cfg.horizon;
    trace.schedule_r.reserve(T);
    trace.availability.reserve(T * M);
    trace.joint.reserve(T);
    for (auto& p : trace.player) {
        p.arm.reserve(T);
        p.phase.reserve(T);
        p.opponents.reserve(T);
        p.reward.reserve(T);
        p.fc_sequence.reserve(T);
        p.fc_r.reserve(T);
        p.fc_index.reserve(T);
        p.fc_point.reserve(T);
    }

    Rng env_rng = make_stream(cfg.seed, Stream::Environment);
    // Every player draws its own exploration trials; periods stay aligned.
    std::vector<Rng> schedule_rng;
    for (std::size_t k = 0; k < K; ++k) {
        schedule_rng.push_back(make_stream(cfg.seed, Stream::Schedule, static_cast<std::uint32_t>(2 * k)));
    }
    std::vector<ScheduleClock> clocks(K);
    JointProfile profile(K);
    std::vector<Decision> decisions(K);

    for (std::size_t t = 0; t < T; ++t) {
        trace.schedule_r.push_back(clocks[0].period());
        for (std::size_t k = 0; k < K; ++k) {
            decisions[k] = agents[k]->decide(clocks[k].current(schedule_rng[k]));
            profile[k] = decisions[k].arm;
        }
        const ChannelState state = sample_state(cfg.radio, env_rng);
        RewardOutcome outcome = pay(state, profile, cfg.radio);
        trace.clipped += outcome.clipped;
        const RewardOutcome filtered = ncb_reward_filter(outcome, profile);

        trace.availability.insert(trace.availability.end(), state.availability.begin(), state.availability.end());
        trace.joint.push_back(encode_joint(profile, M));
        for (std::size_t k = 0; k < K; ++k) {
            const double reward =
                cfg.strategies[k].kind == StrategyKind::NCB ? filtered.throughput[k] : outcome.throughput[k];
            auto& p = trace.player[k];
            p.arm.push_back(profile[k]);
            p.phase.push_back(decisions[k].phase);
            p.opponents.push_back(encode_opponents(profile, k, M));
            p.reward.push_back(reward);
            if (decisions[k].forecast) {
                p.fc_sequence.push_back(decisions[k].forecast->sequence);
                p.fc_r.push_back(decisions[k].forecast->r);
                p.fc_index.push_back(decisions[k].forecast->index);
                p.fc_point.push_back(std::move(decisions[k].forecast->point));
            } else {
                p.fc_sequence.push_back(0);
                p.fc_r.push_back(0);
                p.fc_index.push_back(0);
                p.fc_point.emplace_back();
            }
            agents[k]->observe(Observation{profile, reward, state.availability[profile[k]] != 0});
        }
        for (auto& c : clocks) c.advance();
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (const auto* tel = agents[k]->telemetry()) trace.player[k].telemetry = *tel;
    }
    return trace;
}

}  // namespace calband
