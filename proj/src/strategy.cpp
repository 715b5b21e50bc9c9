#include "calband/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calband/error.hpp"

namespace calband {

std::size_t schedule_period_length(unsigned r) {
    if (r >= 63) throw Error(ErrorCode::ConfigInvalid, "schedule period index too large");
    return std::size_t{1} << r;
}

std::size_t exploration_count(unsigned r) {
    const double length = static_cast<double>(schedule_period_length(r));
    const double z = static_cast<double>(r) / length;
    return static_cast<std::size_t>(std::ceil(length * z));
}

double cumulative_exploration_fraction(unsigned R) {
    double explore = 0.0, total = 0.0;
    for (unsigned r = 1; r <= R; ++r) {
        explore += static_cast<double>(exploration_count(r));
        total += static_cast<double>(schedule_period_length(r));
    }
    return total > 0.0 ? explore / total : 0.0;
}

std::vector<std::size_t> build_period_schedule(unsigned r, Rng& rng) {
    const std::size_t length = schedule_period_length(r);
    const std::size_t k = std::min(exploration_count(r), length);
    // Floyd's sampling without replacement.
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t j = length - k; j < length; ++j) {
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
            chosen.push_back(t);
        } else {
            chosen.push_back(j);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

EstimatorTable::EstimatorTable(std::size_t arms, std::size_t outcomes)
    : arms_(arms), outcomes_(outcomes), means_(arms * outcomes, 0.0), counts_(arms * outcomes, 0) {
    if (arms == 0 || outcomes == 0) throw Error(ErrorCode::DimensionMismatch, "estimator needs arms and outcomes");
}

void EstimatorTable::update(Arm arm, std::size_t outcome, double reward) {
    if (arm >= arms_ || outcome >= outcomes_) throw Error(ErrorCode::DimensionMismatch, "estimator cell out of range");
    if (!std::isfinite(reward) || reward < 0.0) {
        throw Error(ErrorCode::ConfigInvalid, "reward must be finite and >= 0, got " + std::to_string(reward));
    }
    const std::size_t i = arm * outcomes_ + outcome;
    ++counts_[i];
    means_[i] += (reward - means_[i]) / static_cast<double>(counts_[i]);
}

void EstimatorTable::scale(double factor) {
    for (double& m : means_) m *= factor;
}

Arm best_response(const EstimatorTable& table, std::span<const double> forecast) {
    if (forecast.size() != table.outcomes()) {
        throw Error(ErrorCode::DimensionMismatch, "forecast has " + std::to_string(forecast.size()) +
                                                      " entries, estimator expects " +
                                                      std::to_string(table.outcomes()));
    }
    Arm best = 0;
    double best_score = -1.0;
    for (Arm m = 0; m < table.arms(); ++m) {
        double score = 0.0;
        for (std::size_t d = 0; d < forecast.size(); ++d) {
            if (forecast[d] != 0.0) score += forecast[d] * table.mean(m, d);
        }
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::ExploreRandom: return "explore-random";
        case Phase::ExploreBest: return "explore-br";
        case Phase::Exploit: return "exploit";
        case Phase::Baseline: return "baseline";
    }
    return "?";
}

Selection select_action(const EstimatorTable& table, TrialKind kind, std::span<const double> forecast, double gamma,
                        Rng& rng) {
    if (kind == TrialKind::Explore) {
        // One draw decides the branch so that gamma = 1 consumes the stream
        // the same way as any other gamma.
        if (uniform01(rng) >= gamma) return {uniform_index(rng, table.arms()), Phase::ExploreRandom};
        return {best_response(table, forecast), Phase::ExploreBest};
    }
    return {best_response(table, forecast), Phase::Exploit};
}

TrialKind ScheduleClock::current(Rng& rng) {
    if (!drawn_) {
        offsets_ = build_period_schedule(r_, rng);
        drawn_ = true;
    }
    return std::binary_search(offsets_.begin(), offsets_.end(), t_) ? TrialKind::Explore : TrialKind::Exploit;
}

void ScheduleClock::advance() {
    if (++t_ == schedule_period_length(r_)) {
        ++r_;
        t_ = 0;
        drawn_ = false;
    }
}

}  // namespace calband
