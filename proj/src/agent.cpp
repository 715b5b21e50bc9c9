#include "calband/agent.hpp"

namespace calband {

CalibratedBanditAgent::CalibratedBanditAgent(std::size_t player, std::size_t players, std::size_t arms,
                                             ScheduleParams schedule, ForecasterOptions options, std::uint64_t seed)
    : player_(player),
      arms_(arms),
      schedule_(schedule),
      estimator_(arms, opponent_profile_count(players, arms)),
      forecast_rng_(make_stream(seed, Stream::Forecaster, static_cast<std::uint32_t>(player))),
      choice_rng_(make_stream(seed, Stream::Schedule, static_cast<std::uint32_t>(2 * player + 1))) {
    if (estimator_.outcomes() >= 2) forecaster_.emplace(estimator_.outcomes(), options);
}

Decision CalibratedBanditAgent::decide(TrialKind kind) {
    Decision out;
    if (forecaster_) {
        const Forecast fc = forecaster_->emit(forecast_rng_);
        out.forecast = ForecastRecord{forecaster_->period_sequence(), forecaster_->period(), fc.grid_index, fc.point};
        const Selection s = select_action(estimator_, kind, fc.distribution, schedule_.gamma, choice_rng_);
        out.arm = s.arm;
        out.phase = s.phase;
    } else {
        const double certain[1] = {1.0};
        const Selection s = select_action(estimator_, kind, certain, schedule_.gamma, choice_rng_);
        out.arm = s.arm;
        out.phase = s.phase;
    }
    last_arm_ = out.arm;
    return out;
}

void CalibratedBanditAgent::observe(const Observation& obs) {
    const std::size_t d = encode_opponents(obs.profile, player_, arms_);
    estimator_.update(last_arm_, d, obs.reward);
    if (forecaster_) forecaster_->observe(d);
}

const std::vector<PeriodTelemetry>* CalibratedBanditAgent::telemetry() const {
    return forecaster_ ? &forecaster_->telemetry() : nullptr;
}

}  // namespace calband
