#include "calband/oracle.hpp"

#include <algorithm>
#include <future>

namespace calband {

OracleTable::OracleTable(std::size_t players, std::size_t arms)
    : players_(players), arms_(arms), outcomes_(opponent_profile_count(players, arms)) {
    means_.assign(players_ * arms_ * outcomes_, 0.0);
    errors_.assign(means_.size(), 0.0);
}

double OracleTable::best(std::size_t player, std::size_t opponents) const {
    double b = at(player, 0, opponents);
    for (Arm m = 1; m < arms_; ++m) b = std::max(b, at(player, m, opponents));
    return b;
}

double OracleTable::payoff(std::size_t player, const JointProfile& profile) const {
    return at(player, profile[player], encode_opponents(profile, player, arms_));
}

OracleTable compute_oracle_table(const RadioConfig& cfg, std::size_t n_samples, std::uint64_t seed) {
    cfg.validate();
    OracleTable table(cfg.players, cfg.channels);
    // Players are independent; one task each.
    std::vector<std::future<void>> tasks;
    for (std::size_t k = 0; k < cfg.players; ++k) {
        tasks.push_back(std::async(std::launch::async, [&, k] {
            for (Arm m = 0; m < cfg.channels; ++m) {
                for (std::size_t d = 0; d < table.outcomes_; ++d) {
                    const auto est = expected_reward_oracle(cfg, k, m, d, n_samples, seed);
                    const std::size_t i = (k * table.arms_ + m) * table.outcomes_ + d;
                    table.means_[i] = est.mean;
                    table.errors_[i] = est.std_error;
                }
            }
        }));
    }
    for (auto& t : tasks) t.get();
    return table;
}

}  // namespace calband
