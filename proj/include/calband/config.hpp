#pragma once

// Run configuration: JSON with explicit units in field names, the shipped
// presets, and the config hash recorded with every output.

#include <string>
#include <vector>

#include "calband/game.hpp"

namespace calband {

inline constexpr const char* kCodeVersion = "calband 0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Forecaster alone against an i.i.d. outcome stream.
struct ForecasterStudy {
    std::vector<double> law = {0.3, 0.7};  // outcome probabilities; D = law.size()
    std::size_t horizon = 1 << 16;
    bool operator==(const ForecasterStudy&) const = default;
};

enum class RunMode { Game, Forecaster };

struct RunConfig {
    std::string name = "custom";
    RunMode mode = RunMode::Game;
    GameConfig game;
    ForecasterStudy study;
    /// Horizons at which metrics are evaluated; empty means powers of two from
    /// 2^6 plus the horizon.
    std::vector<std::size_t> checkpoints;

    std::size_t horizon() const { return mode == RunMode::Game ? game.horizon : study.horizon; }
    std::uint64_t seed() const { return game.seed; }
    std::vector<std::size_t> effective_checkpoints() const;
    /// Throws Error{ConfigInvalid} naming the field.
    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

/// Throws Error{ConfigInvalid} naming the offending field.
RunConfig parse_config(const std::string& json_text);
/// Throws Error{IoError} or Error{ConfigInvalid}.
RunConfig load_config(const std::string& path);
/// Canonical text: every field written, keys sorted, two-space indent.
std::string serialize_config(const RunConfig& cfg);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);
/// sha256_hex(serialize_config(cfg)).
std::string config_hash(const RunConfig& cfg);

/// k2m2, k4m4-ortho, k4m4-nonortho, forecaster-only. Throws Error{ConfigInvalid}.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace calband
