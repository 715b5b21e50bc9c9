#pragma once

// The repeated game: K agents on aligned periods, each with its own exploration
// trials, the radio environment and a full per-trial record.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calband/agent.hpp"
#include "calband/baselines.hpp"

namespace calband {

enum class StrategyKind { CB, NCB, GQL, AB, UR, SC };

const char* to_string(StrategyKind kind);
/// Throws Error{ConfigInvalid}.
StrategyKind strategy_from_string(const std::string& name);

struct PlayerSpec {
    StrategyKind kind = StrategyKind::CB;
    QLearningParams gql;
    bool operator==(const PlayerSpec&) const = default;
};

struct GameConfig {
    RadioConfig radio;
    ScheduleParams schedule;
    ForecasterOptions forecaster;
    std::vector<PlayerSpec> strategies;  // one per player
    std::size_t horizon = 1 << 14;
    std::uint64_t seed = 1;
    std::size_t oracle_samples = 100'000;
    std::size_t profile_cap = tol::kDefaultProfileCap;

    /// Throws Error{ConfigInvalid} naming the field.
    void validate() const;
    bool operator==(const GameConfig&) const = default;
};

struct PlayerTrace {
    std::vector<Arm> arm;
    std::vector<Phase> phase;
    std::vector<std::size_t> opponents;  // encoded d
    std::vector<double> reward;          // realized (after the NCB filter for NCB players)
    // Forecast columns; fc_r == 0 when the player does not forecast.
    std::vector<std::size_t> fc_sequence;
    std::vector<unsigned> fc_r;
    std::vector<std::size_t> fc_index;
    std::vector<LatticePoint> fc_point;
    std::vector<PeriodTelemetry> telemetry;
};

struct RunTrace {
    std::size_t players = 0;
    std::size_t arms = 0;
    std::size_t outcomes = 0;
    std::uint64_t seed = 0;
    std::vector<StrategyKind> strategies;
    std::vector<unsigned> schedule_r;          // per trial
    std::vector<std::uint8_t> availability;    // trials x M
    std::vector<std::size_t> joint;            // encoded joint profile per trial
    std::vector<PlayerTrace> player;
    std::size_t clipped = 0;

    std::size_t trials() const noexcept { return joint.size(); }
    bool available(std::size_t t, Arm m) const { return availability[t * arms + m] != 0; }
};

/// Plays cfg.horizon trials. SC players need the oracle; it is computed from
/// cfg when not supplied.
RunTrace run_game(const GameConfig& cfg, const OracleTable* oracle = nullptr);

}  // namespace calband
