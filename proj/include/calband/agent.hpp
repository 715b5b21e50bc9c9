#pragma once

// Common interface for every strategy in a game, and the calibrated bandit
// agent (CB, and NCB when collisions are filtered).

#include <memory>
#include <optional>
#include <vector>

#include "calband/env.hpp"
#include "calband/forecaster.hpp"
#include "calband/strategy.hpp"

namespace calband {

struct ForecastRecord {
    std::size_t sequence = 0;  // forecaster period sequence
    unsigned r = 1;            // forecaster period index
    std::size_t index = 0;     // column of the forecast
    LatticePoint point;
};

struct Decision {
    Arm arm = 0;
    Phase phase = Phase::Baseline;
    std::optional<ForecastRecord> forecast;
};

/// What a player learns after a trial: its own reward, whether its channel
/// was available, and everyone's channel (the broadcast).
struct Observation {
    const JointProfile& profile;
    double reward;
    bool channel_available;
};

class Agent {
public:
    virtual ~Agent() = default;
    /// `kind` is the kind of the current trial on this player's schedule.
    virtual Decision decide(TrialKind kind) = 0;
    virtual void observe(const Observation& obs) = 0;
    virtual const std::vector<PeriodTelemetry>* telemetry() const { return nullptr; }
};

class CalibratedBanditAgent final : public Agent {
public:
    CalibratedBanditAgent(std::size_t player, std::size_t players, std::size_t arms, ScheduleParams schedule,
                          ForecasterOptions options, std::uint64_t seed);

    Decision decide(TrialKind kind) override;
    void observe(const Observation& obs) override;
    const std::vector<PeriodTelemetry>* telemetry() const override;

    const EstimatorTable& estimator() const noexcept { return estimator_; }
    const Forecaster* forecaster() const noexcept { return forecaster_ ? &*forecaster_ : nullptr; }

private:
    std::size_t player_;
    std::size_t arms_;
    ScheduleParams schedule_;
    EstimatorTable estimator_;
    std::optional<Forecaster> forecaster_;  // absent when there are no opponents
    Rng forecast_rng_;
    Rng choice_rng_;
    Arm last_arm_ = 0;
};

}  // namespace calband
