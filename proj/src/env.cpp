#include "calband/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calband/error.hpp"

namespace calband {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

// Quantile of Exponential(mean 1) at 0.9999.
const double kGainQuantile = std::log(1.0e4);

double rate(const RadioConfig& cfg, double direct_gain, double interference_gain, double cap, bool& clipped) {
    const double sinr = cfg.tx_power_w * direct_gain / (cfg.tx_power_w * interference_gain + cfg.noise_w);
    const double r = std::log2(1.0 + sinr);
    clipped = r > cap;
    return clipped ? cap : r;
}

void check_profile(const JointProfile& profile, const RadioConfig& cfg) {
    if (profile.size() != cfg.players) {
        throw Error(ErrorCode::InvalidProfile, "profile has " + std::to_string(profile.size()) + " entries for " +
                                                   std::to_string(cfg.players) + " players");
    }
    for (Arm a : profile) {
        if (a >= cfg.channels) throw Error(ErrorCode::InvalidProfile, "channel index " + std::to_string(a) + " out of range");
    }
}

std::vector<std::size_t> occupancy_of(const JointProfile& profile, std::size_t channels) {
    std::vector<std::size_t> occ(channels, 0);
    for (Arm a : profile) ++occ[a];
    return occ;
}

}  // namespace

double TauModel::share(std::size_t occupancy) const {
    if (occupancy == 0) return 0.0;
    if (kind == Kind::FixedFractions && occupancy <= fractions.size()) return fractions[occupancy - 1];
    return 1.0 / static_cast<double>(occupancy);
}

void RadioConfig::validate() const {
    if (players < 1) invalid("radio.players", "must be >= 1");
    if (channels < 1) invalid("radio.channels", "must be >= 1");
    if (theta.size() != channels) invalid("radio.theta", "expected " + std::to_string(channels) + " entries");
    for (double t : theta)
        if (!(t >= 0.0 && t <= 1.0)) invalid("radio.theta", "probabilities must lie in [0, 1]");
    if (!(tx_power_w > 0.0) || !std::isfinite(tx_power_w)) invalid("radio.tx_power_w", "must be > 0");
    if (!(noise_w > 0.0) || !std::isfinite(noise_w)) invalid("radio.noise_w", "must be > 0");
    if (mean_gain.size() != players * players * channels) {
        invalid("radio.mean_gain", "expected K*K*M = " + std::to_string(players * players * channels) + " entries");
    }
    for (double g : mean_gain)
        if (!(g > 0.0) || !std::isfinite(g)) invalid("radio.mean_gain", "gains must be finite and > 0");
    for (double f : tau.fractions)
        if (!(f >= 0.0 && f <= 1.0)) invalid("radio.tau.fractions", "fractions must lie in [0, 1]");
}

double reward_bound(const RadioConfig& cfg) {
    const double g_max = *std::max_element(cfg.mean_gain.begin(), cfg.mean_gain.end()) * kGainQuantile;
    return std::log2(1.0 + cfg.tx_power_w * g_max / cfg.noise_w);
}

ChannelState sample_state(const RadioConfig& cfg, Rng& rng) {
    ChannelState s;
    s.availability.resize(cfg.channels);
    for (std::size_t m = 0; m < cfg.channels; ++m) {
        s.availability[m] = std::bernoulli_distribution(cfg.theta[m])(rng) ? 1 : 0;
    }
    s.gains.resize(cfg.mean_gain.size());
    for (std::size_t i = 0; i < s.gains.size(); ++i) {
        s.gains[i] = std::exponential_distribution<double>(1.0 / cfg.mean_gain[i])(rng);
    }
    return s;
}

RewardOutcome reward_orthogonal(const ChannelState& state, const JointProfile& profile, const RadioConfig& cfg) {
    check_profile(profile, cfg);
    RewardOutcome out;
    out.occupancy = occupancy_of(profile, cfg.channels);
    out.throughput.assign(cfg.players, 0.0);
    out.time_share.assign(cfg.players, 0.0);
    const double cap = reward_bound(cfg);
    for (std::size_t k = 0; k < cfg.players; ++k) {
        const Arm m = profile[k];
        out.time_share[k] = cfg.tau.share(out.occupancy[m]);
        if (!state.availability[m]) continue;
        bool clipped = false;
        const double r = rate(cfg, state.gain(cfg, k, k, m), 0.0, cap, clipped);
        out.clipped += clipped ? 1 : 0;
        out.throughput[k] = out.time_share[k] * r;
    }
    return out;
}

RewardOutcome reward_nonorthogonal(const ChannelState& state, const JointProfile& profile, const RadioConfig& cfg) {
    check_profile(profile, cfg);
    RewardOutcome out;
    out.occupancy = occupancy_of(profile, cfg.channels);
    out.throughput.assign(cfg.players, 0.0);
    out.time_share.assign(cfg.players, 1.0);
    const double cap = reward_bound(cfg);
    for (std::size_t k = 0; k < cfg.players; ++k) {
        const Arm m = profile[k];
        if (!state.availability[m]) continue;
        double interference = 0.0;
        for (std::size_t l = 0; l < cfg.players; ++l) {
            if (l != k && profile[l] == m) interference += state.gain(cfg, l, k, m);
        }
        bool clipped = false;
        out.throughput[k] = rate(cfg, state.gain(cfg, k, k, m), interference, cap, clipped);
        out.clipped += clipped ? 1 : 0;
    }
    return out;
}

RewardOutcome pay(const ChannelState& state, const JointProfile& profile, const RadioConfig& cfg) {
    return cfg.access == AccessMode::Orthogonal ? reward_orthogonal(state, profile, cfg)
                                                : reward_nonorthogonal(state, profile, cfg);
}

OracleEstimate expected_reward_oracle(const RadioConfig& cfg, std::size_t player, Arm arm, std::size_t opponents,
                                      std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw Error(ErrorCode::ConfigInvalid, "oracle n_samples must be >= 1");
    const JointProfile profile = with_opponents(opponents, player, arm, cfg.players, cfg.channels);
    check_profile(profile, cfg);

    std::vector<std::size_t> interferers;
    std::size_t occupancy = 0;
    for (std::size_t l = 0; l < cfg.players; ++l) {
        if (profile[l] != arm) continue;
        ++occupancy;
        if (l != player) interferers.push_back(l);
    }
    const double share = cfg.access == AccessMode::Orthogonal ? cfg.tau.share(occupancy) : 1.0;
    const double cap = reward_bound(cfg);

    Rng rng = make_stream(seed, Stream::Oracle, static_cast<std::uint32_t>(player));
    std::bernoulli_distribution available(cfg.theta[arm]);
    std::exponential_distribution<double> direct(1.0 / cfg.gain(player, player, arm));

    // Welford running mean / variance.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double x = 0.0;
        if (available(rng)) {
            const double g = direct(rng);
            double interference = 0.0;
            if (cfg.access == AccessMode::NonOrthogonal) {
                for (std::size_t l : interferers) {
                    interference += std::exponential_distribution<double>(1.0 / cfg.gain(l, player, arm))(rng);
                }
            }
            bool clipped = false;
            x = share * rate(cfg, g, interference, cap, clipped);
        }
        const double delta = x - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (x - mean);
    }
    OracleEstimate est;
    est.mean = mean;
    if (n_samples > 1) est.std_error = std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
    return est;
}

double expected_log2_one_plus_exponential(double mean_snr) {
    const double x = 1.0 / mean_snr;
    // E1(x) = -Ei(-x)
    return std::exp(x) * -std::expint(-x) / std::log(2.0);
}

}  // namespace calband
