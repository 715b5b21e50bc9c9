#include <algorithm>
#include <cmath>

#include "calband/baselines.hpp"
#include "calband/error.hpp"
#include "calband/game.hpp"
#include "doctest.h"

using namespace calband;

TEST_CASE("uniform random selection frequencies") {
    Rng rng = make_stream(1, Stream::Baseline);
    const int n = 100000;
    std::vector<int> hits(5, 0);
    for (int i = 0; i < n; ++i) ++hits[ur_select(5, rng)];
    const double sd = std::sqrt(n * 0.2 * 0.8);
    for (int h : hits) CHECK(std::abs(h - n * 0.2) <= 3.0 * sd);
}

TEST_CASE("uniform random with one arm and under a fixed seed") {
    Rng rng = make_stream(2, Stream::Baseline);
    for (int i = 0; i < 100; ++i) CHECK(ur_select(1, rng) == 0);
    UniformRandomAgent a(0, 4, 9), b(0, 4, 9);
    for (int i = 0; i < 100; ++i) CHECK(a.decide(TrialKind::Exploit).arm == b.decide(TrialKind::Exploit).arm);
}

TEST_CASE("availability score prefers the better channel at equal occupancy") {
    AvailabilityState s(2);
    for (int i = 0; i < 10; ++i) {
        s.record(0, i != 0);  // 9 of 10
        s.record(1, i == 0);  // 1 of 10
    }
    CHECK(s.availability(0) == doctest::Approx(0.9));
    CHECK(s.availability(1) == doctest::Approx(0.1));
    s.others_last = {1.0, 1.0};
    Rng rng = make_stream(3, Stream::Baseline);
    const double scores[2] = {s.score(0), s.score(1)};
    CHECK(argmax_random_tie(scores, rng) == 0);
    const double scaled[2] = {3.0 * s.score(0), 3.0 * s.score(1)};
    CHECK(argmax_random_tie(scaled, rng) == 0);
}

TEST_CASE("availability score picks the least crowded channel when availabilities match") {
    AvailabilityState s(3);
    s.others_last = {2.0, 0.0, 1.0};
    Rng rng = make_stream(4, Stream::Baseline);
    const double scores[3] = {s.score(0), s.score(1), s.score(2)};
    CHECK(argmax_random_tie(scores, rng) == 1);
    CHECK(s.score(1) == doctest::Approx(1.0));  // unvisited channels count as available
}

TEST_CASE("availability agent learns from its own channel and counts the others") {
    AvailabilityAgent a(0, 2, 1);
    const Arm first = a.decide(TrialKind::Exploit).arm;
    const JointProfile played = {first, 0, 1};
    a.observe(Observation{played, 0.0, false});
    CHECK(a.state().visits[first] == 1.0);
    CHECK(a.state().availability(first) == 0.0);
    CHECK(a.state().others_last[0] == 1.0);
    CHECK(a.state().others_last[1] == 1.0);
}

TEST_CASE("random ties are spread over all maxima") {
    Rng rng = make_stream(5, Stream::Baseline);
    const double scores[4] = {1.0, 0.5, 1.0, 1.0};
    std::vector<int> hits(4, 0);
    for (int i = 0; i < 30000; ++i) ++hits[argmax_random_tie(scores, rng)];
    CHECK(hits[1] == 0);
    for (int k : {0, 2, 3}) CHECK(std::abs(hits[k] - 10000) <= 3.0 * std::sqrt(30000.0 / 3 * 2 / 3));
}

TEST_CASE("colliding users receive nothing") {
    RewardOutcome o;
    o.throughput = {1.0, 2.0, 3.0};
    o.occupancy = {2, 1, 0};
    const RewardOutcome f = ncb_reward_filter(o, {0, 0, 1});
    CHECK(f.throughput == std::vector<double>{0.0, 0.0, 3.0});
}

TEST_CASE("collision filter leaves distinct channels alone") {
    RewardOutcome o;
    o.throughput = {1.5, 2.5, 0.5};
    o.occupancy = {1, 1, 1};
    CHECK(ncb_reward_filter(o, {2, 0, 1}).throughput == o.throughput);
    RewardOutcome solo;
    solo.throughput = {4.0};
    solo.occupancy = {0, 1};
    CHECK(ncb_reward_filter(solo, {1}).throughput == solo.throughput);
}

TEST_CASE("Q update examples") {
    std::vector<double> q(4, 0.0);
    gql_update(q, 2, 1, 0, 0.5, 2.0);
    CHECK(q[2] == doctest::Approx(1.0));
    gql_update(q, 2, 1, 0, 1.0, 7.0);
    CHECK(q[2] == 7.0);
    gql_update(q, 2, 1, 0, 1.0, 3.0);
    CHECK(q[2] == 3.0);
    CHECK(q[0] == 0.0);
}

TEST_CASE("Q-learning agent indexes its state by the last opponent profile") {
    QLearningAgent a(1, 2, 3, {0.1, 0.5}, 1);
    const Arm m = a.decide(TrialKind::Exploit).arm;
    JointProfile p = {2, m};
    a.observe(Observation{p, 4.0, true});
    CHECK(a.q(m, 0) == doctest::Approx(2.0));
    a.observe(Observation{p, 4.0, true});  // state is now d = 2
    CHECK(a.q(m, 2) == doctest::Approx(2.0));
}

TEST_CASE("Q-learning rejects out-of-range parameters") {
    CHECK_THROWS_AS(QLearningAgent(0, 2, 2, {1.5, 0.1}, 1), Error);
    CHECK_THROWS_AS(QLearningAgent(0, 2, 2, {0.1, 0.0}, 1), Error);
}

TEST_CASE("fully random Q-learning is indistinguishable from uniform random") {
    const std::size_t M = 4;
    QLearningAgent q(0, 2, M, {1.0, 0.1}, 3);
    UniformRandomAgent u(0, M, 4);
    const int n = 40000;
    std::vector<double> a(M, 0.0), b(M, 0.0);
    for (int i = 0; i < n; ++i) {
        const Arm x = q.decide(TrialKind::Exploit).arm;
        JointProfile p = {x, static_cast<Arm>(i % M)};
        q.observe(Observation{p, 1.0, true});
        a[x] += 1.0;
        b[u.decide(TrialKind::Exploit).arm] += 1.0;
    }
    // Pearson chi-square on the 2 x M table; 11.345 is the 0.99 quantile for 3 dof.
    double chi2 = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const double e = (a[m] + b[m]) / 2.0;
        chi2 += (a[m] - e) * (a[m] - e) / e + (b[m] - e) * (b[m] - e) / e;
    }
    CHECK(chi2 < 11.345);
}

namespace {

RadioConfig radio(std::size_t K, std::size_t M, std::vector<double> theta, AccessMode access, double gain = 4.0) {
    RadioConfig cfg;
    cfg.players = K;
    cfg.channels = M;
    cfg.theta = std::move(theta);
    cfg.set_symmetric_gain(gain);
    cfg.access = access;
    return cfg;
}

double social_error(const OracleTable& o, const JointProfile& p) {
    double v = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double e = o.std_error(k, p[k], encode_opponents(p, k, o.arms()));
        v += e * e;
    }
    return std::sqrt(v);
}

double social(const OracleTable& o, const JointProfile& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += o.at(k, p[k], encode_opponents(p, k, o.arms()));
    return s;
}

}  // namespace

TEST_CASE("centralized assignment matches brute force with a dead channel") {
    // At low SNR two interfering users on the live channel beat one alone.
    for (AccessMode access : {AccessMode::NonOrthogonal, AccessMode::Orthogonal}) {
        const OracleTable o = compute_oracle_table(radio(2, 2, {1.0, 0.0}, access, 0.5), 20000, 3);
        JointProfile best;
        double best_value = -1.0;
        for (Arm a = 0; a < 2; ++a)
            for (Arm b = 0; b < 2; ++b) {
                const double v = social(o, {a, b});
                if (v > best_value) {
                    best_value = v;
                    best = {a, b};
                }
            }
        const JointProfile got = sc_assign(o);
        CHECK(got == best);
        CHECK(social(o, got) == doctest::Approx(best_value));
        if (access == AccessMode::NonOrthogonal) CHECK(got == JointProfile{0, 0});
    }
}

TEST_CASE("centralized assignment value is invariant under relabeling players") {
    const OracleTable o = compute_oracle_table(radio(3, 3, {0.9, 0.6, 0.4}, AccessMode::Orthogonal), 20000, 1);
    JointProfile p = sc_assign(o);
    const double v = social(o, p), e = social_error(o, p);
    std::sort(p.begin(), p.end());
    do {
        // Equal up to Monte Carlo error: each player's cells are sampled separately.
        CHECK(std::abs(social(o, p) - v) <= 4.0 * std::hypot(e, social_error(o, p)));
    } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("centralized assignment with no available channel takes the first profile") {
    const OracleTable o = compute_oracle_table(radio(2, 3, {0.0, 0.0, 0.0}, AccessMode::Orthogonal), 1000, 1);
    CHECK(sc_assign(o) == JointProfile{0, 0});
    CHECK_THROWS_AS(sc_assign(o, 8), Error);
}

TEST_CASE("the collision filter variant equals the calibrated bandit for one player") {
    GameConfig cfg;
    cfg.radio = radio(1, 3, {0.9, 0.5, 0.2}, AccessMode::Orthogonal);
    cfg.horizon = 4000;
    cfg.strategies = {PlayerSpec{StrategyKind::CB, {}}};
    const RunTrace a = run_game(cfg);
    cfg.strategies = {PlayerSpec{StrategyKind::NCB, {}}};
    const RunTrace b = run_game(cfg);
    CHECK(a.joint == b.joint);
    CHECK(a.player[0].reward == b.player[0].reward);
}
