#pragma once

// Stochastic D2D channel environment: Bernoulli channel availability, Rayleigh
// block fading, and per-trial throughput under time-shared (orthogonal) or
// interfering (non-orthogonal) access.

#include <cstdint>
#include <vector>

#include "calband/profile.hpp"
#include "calband/rng.hpp"

namespace calband {

enum class AccessMode { Orthogonal, NonOrthogonal };

/// Fraction of the transmission phase a user gets on a shared channel.
struct TauModel {
    enum class Kind { EqualShare, FixedFractions };
    Kind kind = Kind::EqualShare;
    /// FixedFractions: entry L-1 is the share of each of L co-channel users.
    /// Occupancies beyond the table fall back to 1/L.
    std::vector<double> fractions;

    double share(std::size_t occupancy) const;
    bool operator==(const TauModel&) const = default;
};

struct RadioConfig {
    std::size_t players = 2;
    std::size_t channels = 2;
    std::vector<double> theta;  // availability probability per channel
    double tx_power_w = 1.0;
    double noise_w = 1.0;
    /// Mean power gain from the transmitter of pair u to the receiver of pair v
    /// on channel m, stored at (u * K + v) * M + m. The direct link of pair k is (k, k).
    std::vector<double> mean_gain;
    AccessMode access = AccessMode::Orthogonal;
    TauModel tau;

    double gain(std::size_t from, std::size_t to, std::size_t channel) const {
        return mean_gain[(from * players + to) * channels + channel];
    }

    /// Every link on every channel gets the same mean gain.
    void set_symmetric_gain(double g) { mean_gain.assign(players * players * channels, g); }

    /// Throws Error{ConfigInvalid} naming the offending field.
    void validate() const;

    bool operator==(const RadioConfig&) const = default;
};

/// Upper bound A on any single reward: log2(1 + P g_max / N0) with g_max the
/// 0.9999 quantile of the exponential gain with the largest mean.
double reward_bound(const RadioConfig& cfg);

struct ChannelState {
    std::vector<std::uint8_t> availability;  // I_m
    std::vector<double> gains;               // |h|^2, same layout as RadioConfig::mean_gain

    double gain(const RadioConfig& cfg, std::size_t from, std::size_t to, std::size_t channel) const {
        return gains[(from * cfg.players + to) * cfg.channels + channel];
    }
};

ChannelState sample_state(const RadioConfig& cfg, Rng& rng);

struct RewardOutcome {
    std::vector<double> throughput;  // per player
    std::vector<double> time_share;  // per player; 1 under NonOrthogonal
    std::vector<std::size_t> occupancy;  // per channel
    std::size_t clipped = 0;             // rewards capped at reward_bound()
};

RewardOutcome reward_orthogonal(const ChannelState& state, const JointProfile& profile, const RadioConfig& cfg);
RewardOutcome reward_nonorthogonal(const ChannelState& state, const JointProfile& profile, const RadioConfig& cfg);

/// Dispatches on cfg.access.
RewardOutcome pay(const ChannelState& state, const JointProfile& profile, const RadioConfig& cfg);

struct OracleEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo mean of player k's reward on `arm` against the encoded opponent
/// profile, over fresh channel realizations. Evaluation-only: learning agents
/// never see it.
OracleEstimate expected_reward_oracle(const RadioConfig& cfg, std::size_t player, Arm arm,
                                      std::size_t opponents, std::size_t n_samples, std::uint64_t seed);

/// E[log2(1 + X)] for X ~ Exponential(mean s): e^{1/s} E1(1/s) / ln 2.
double expected_log2_one_plus_exponential(double mean_snr);

}  // namespace calband
