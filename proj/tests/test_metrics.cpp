#include <cmath>
#include <random>

#include "calband/error.hpp"
#include "calband/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace calband;

namespace {

// One player, D = 1; only the fields the metrics read are filled.
RunTrace single_player_trace(const std::vector<Arm>& arms, std::size_t M = 2) {
    RunTrace t;
    t.players = 1;
    t.arms = M;
    t.outcomes = 1;
    t.player.resize(1);
    for (Arm a : arms) {
        t.joint.push_back(a);
        t.player[0].arm.push_back(a);
        t.player[0].opponents.push_back(0);
        t.player[0].reward.push_back(static_cast<double>(a));
        t.player[0].phase.push_back(Phase::Exploit);
    }
    return t;
}

OracleTable two_arm_oracle(double a, double b) {
    OracleTable o(1, 2);
    o.at(0, 0, 0) = a;
    o.at(0, 1, 0) = b;
    return o;
}

// Two-player, two-action game from payoff arrays u[k][own][other].
OracleTable bimatrix(const double u0[2][2], const double u1[2][2]) {
    OracleTable o(2, 2);
    for (Arm i = 0; i < 2; ++i)
        for (std::size_t d = 0; d < 2; ++d) {
            o.at(0, i, d) = u0[i][d];
            o.at(1, i, d) = u1[i][d];
        }
    return o;
}

// pi indexed by (a0, a1) -> 2 * a0 + a1. Checks the CE inequalities without
// going through the library.
bool is_ce(const double pi[4], const double u0[2][2], const double u1[2][2]) {
    for (int i = 0; i < 2; ++i) {
        const int j = 1 - i;
        double g0 = 0.0, g1 = 0.0;
        for (int o = 0; o < 2; ++o) {
            g0 += pi[2 * i + o] * (u0[i][o] - u0[j][o]);
            g1 += pi[2 * o + i] * (u1[i][o] - u1[j][o]);
        }
        if (g0 < -1e-12 || g1 < -1e-12) return false;
    }
    return true;
}

// Brute-force l1 distance from pi_hat to the CE set over a 1e-2 grid.
double grid_ce_distance(const double pi_hat[4], const double u0[2][2], const double u1[2][2]) {
    const int n = 100;
    double best = 1e9;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b)
            for (int c = 0; a + b + c <= n; ++c) {
                const double pi[4] = {a / 100.0, b / 100.0, c / 100.0, (n - a - b - c) / 100.0};
                if (!is_ce(pi, u0, u1)) continue;
                double d = 0.0;
                for (int m = 0; m < 4; ++m) d += std::abs(pi[m] - pi_hat[m]);
                best = std::min(best, d);
            }
    return best;
}

// Prisoner's dilemma, action 1 = defect (dominant).
const double kPd[2][2] = {{3.0, 0.0}, {5.0, 1.0}};
// Chicken, action 1 = dare.
const double kChicken[2][2] = {{6.0, 2.0}, {7.0, 0.0}};

OracleTable k4m4_oracle() {
    RadioConfig r;
    r.players = 4;
    r.channels = 4;
    r.theta = {0.9, 0.8, 0.7, 0.6};
    r.set_symmetric_gain(10.0);
    return compute_oracle_table(r, 2000, 7);
}

}  // namespace

TEST_CASE("consistency of the always-optimal player is 1 with zero regret") {
    const OracleTable o = two_arm_oracle(1.0, 0.0);
    const auto s = consistency_series(single_player_trace(std::vector<Arm>(500, 0)), o, {10, 100, 500, 900});
    REQUIRE(s.size() == 3);  // 900 lies beyond the trace
    for (const auto& p : s) {
        CHECK(p.S[0] == 1.0);
        CHECK(p.regret[0] == 0.0);
    }
}

TEST_CASE("consistency of the always-worst player is 0") {
    const OracleTable o = two_arm_oracle(1.0, 0.0);
    const auto s = consistency_series(single_player_trace(std::vector<Arm>(100, 1)), o, {100});
    CHECK(s[0].S[0] == 0.0);
    CHECK(s[0].regret[0] == -1.0);
}

TEST_CASE("uniform play on arms worth 1 and 0 gives S near 1/2 and regret near -1/4") {
    std::mt19937_64 rng(3);
    std::vector<Arm> arms(10000);
    for (Arm& a : arms) a = static_cast<Arm>(rng() & 1);
    // Regret is -1/4 when the bad arm costs 1/2 on average: means (1, 0.5)
    // give (f - f*) = -1/2 half the time.
    const auto s = consistency_series(single_player_trace(arms), two_arm_oracle(1.0, 0.0), {10000});
    CHECK(std::abs(s[0].S[0] - 0.5) <= 0.02);
    const auto r = consistency_series(single_player_trace(arms), two_arm_oracle(1.0, 0.5), {10000});
    CHECK(std::abs(r[0].regret[0] + 0.25) <= 0.01);
}

TEST_CASE("an all-zero oracle is reported, not clamped") {
    CHECK_THROWS_AS(consistency_series(single_player_trace({0, 1}), two_arm_oracle(0.0, 0.0), {2}), Error);
}

TEST_CASE("S and per-round regret satisfy S = 1 + regret * T / sum f* on a game trace") {
    GameConfig cfg;
    cfg.radio.theta = {0.9, 0.35};
    cfg.radio.set_symmetric_gain(10.0);
    cfg.strategies.assign(2, PlayerSpec{StrategyKind::CB, {}});
    cfg.horizon = 5000;
    const OracleTable o = compute_oracle_table(cfg.radio, 5000, 1);
    const RunTrace trace = run_game(cfg, &o);
    for (const auto& p : consistency_series(trace, o, geometric_checkpoints(5000, 4))) {
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(std::abs(p.S[k] - (1.0 + p.regret[k] * p.horizon / p.denominator[k])) <= 1e-12);
            CHECK(p.S[k] <= 1.0);
            CHECK(p.regret[k] <= 0.0);
        }
    }
}

TEST_CASE("empirical frequencies") {
    const RunTrace same = single_player_trace(std::vector<Arm>(7, 1));
    CHECK(empirical_frequencies(same, 0, 7) == Vector{0.0, 1.0});
    const RunTrace alt = single_player_trace({0, 1, 0, 1}, 3);
    CHECK(empirical_frequencies(alt, 0, 4) == Vector{0.5, 0.5, 0.0});
    CHECK(empirical_frequencies(alt, 1, 2) == Vector{0.0, 1.0, 0.0});
    std::mt19937_64 rng(1);
    std::vector<Arm> arms(999);
    for (Arm& a : arms) a = static_cast<Arm>(rng() % 3);
    const Vector pi = empirical_frequencies(single_player_trace(arms, 3), 0, 999);
    CHECK(pi[0] + pi[1] + pi[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(empirical_frequencies(alt, 2, 2), Error);
    CHECK_THROWS_AS(empirical_frequencies(alt, 0, 5), Error);
}

TEST_CASE("a Dirac on the dominant-strategy profile is already a correlated equilibrium") {
    const OracleTable o = bimatrix(kPd, kPd);
    const double dd[4] = {0, 0, 0, 1};
    REQUIRE(is_ce(dd, kPd, kPd));
    CHECK(ce_distance(Vector(dd, dd + 4), o) == doctest::Approx(0.0));
    CHECK(ce_violation(Vector(dd, dd + 4), o) == 0.0);
}

TEST_CASE("a Dirac on the dominated profile matches the grid search") {
    const OracleTable o = bimatrix(kPd, kPd);
    const double cc[4] = {1, 0, 0, 0};
    const double grid = grid_ce_distance(cc, kPd, kPd);
    CHECK(grid == doctest::Approx(2.0));
    CHECK(ce_distance(Vector(cc, cc + 4), o) == doctest::Approx(grid).epsilon(1e-9));
}

TEST_CASE("distances in a game with a rich equilibrium set match the grid search") {
    const OracleTable o = bimatrix(kChicken, kChicken);
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 6; ++rep) {
        const Vector v = oracle::sample_simplex(rng, 4);
        const double pi_hat[4] = {v[0], v[1], v[2], v[3]};
        const double grid = grid_ce_distance(pi_hat, kChicken, kChicken);
        const double lp = ce_distance(v, o);
        CHECK(lp <= grid + 1e-9);
        CHECK(grid - lp <= 0.03);
    }
    const double both_dare[4] = {0, 0, 0, 1};
    CHECK(ce_distance(Vector(both_dare, both_dare + 4), o) ==
          doctest::Approx(grid_ce_distance(both_dare, kChicken, kChicken)).epsilon(0.02));
}

TEST_CASE("distance to the equilibrium set is 1-Lipschitz") {
    const OracleTable o = bimatrix(kChicken, kChicken);
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector a = oracle::sample_simplex(rng, 4);
        const Vector b = oracle::sample_simplex(rng, 4);
        Vector c(4);
        for (int m = 0; m < 4; ++m) c[m] = 0.9 * a[m] + 0.1 * b[m];
        CHECK(std::abs(ce_distance(a, o) - ce_distance(c, o)) <= l1_distance(a, c) + 1e-9);
    }
}

TEST_CASE("members of the equilibrium set have distance 0") {
    const OracleTable o = bimatrix(kChicken, kChicken);
    const double mix[4] = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};  // the classic traffic-light CE
    REQUIRE(is_ce(mix, kChicken, kChicken));
    CHECK(ce_distance(Vector(mix, mix + 4), o) <= 1e-9);
}

TEST_CASE("nearest equilibria on the four-player game are equilibria at the reported distance") {
    const OracleTable o = k4m4_oracle();
    std::mt19937_64 rng(8);
    std::vector<Vector> cases;
    for (std::size_t idx : {0, 27, 85, 170, 228, 255}) {
        Vector d(256, 0.0);
        d[idx] = 1.0;
        cases.push_back(d);
    }
    for (int rep = 0; rep < 4; ++rep) cases.push_back(oracle::sample_simplex(rng, 256));
    for (const Vector& pi_hat : cases) {
        const CeProjection p = nearest_correlated_equilibrium(pi_hat, o);
        double mass = 0.0;
        for (double x : p.pi) mass += x;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(ce_violation(p.pi, o) <= 1e-9);
        CHECK(l1_distance(p.pi, pi_hat) == doctest::Approx(p.distance).epsilon(1e-7));
        CHECK(ce_distance(p.pi, o) <= 1e-7);
    }
}

TEST_CASE("a wrongly sized frequency vector is rejected") {
    const OracleTable o = bimatrix(kPd, kPd);
    CHECK_THROWS_AS(ce_distance(Vector(3, 1.0 / 3), o), Error);
}

TEST_CASE("always-correct Dirac forecasts score 0 in every period") {
    CalibrationAccumulator acc(3);
    std::mt19937_64 rng(1);
    for (unsigned r = 1; r <= 8; ++r) {
        for (std::size_t t = 0; t < (std::size_t{1} << r); ++t) {
            const std::size_t d = rng() % 3;
            LatticePoint p(3, 0);
            p[d] = 4;
            acc.add(r, r, p, d);
        }
    }
    REQUIRE(acc.rows.size() == 8);
    for (const auto& row : acc.rows) CHECK(row.score == 0.0);
}

TEST_CASE("a constant correct forecast becomes calibrated as periods lengthen") {
    CalibrationAccumulator acc(2);
    std::mt19937_64 rng(2);
    std::bernoulli_distribution one(0.75);
    const LatticePoint p = {1, 3};
    for (unsigned r = 1; r <= 16; ++r)
        for (std::size_t t = 0; t < (std::size_t{1} << r); ++t) acc.add(r, r, p, one(rng) ? 1 : 0);
    REQUIRE(acc.rows.size() == 16);
    for (const auto& row : acc.rows) CHECK(row.score >= 0.0);
    // Score = 2 |0.25 - empirical share of outcome 0|.
    const double sd = std::sqrt(0.25 * 0.75 / 65536.0);
    CHECK(acc.rows.back().score <= 2.0 * 4.0 * sd);
    CHECK(acc.rows.back().eps == doctest::Approx(std::pow(2.0, -16.0 / 3.0)));
}

TEST_CASE("calibration scores of a game trace are nonnegative and tagged by period") {
    GameConfig cfg;
    cfg.radio.theta = {0.9, 0.35};
    cfg.radio.set_symmetric_gain(10.0);
    cfg.strategies.assign(2, PlayerSpec{StrategyKind::CB, {}});
    cfg.horizon = 4000;
    const RunTrace trace = run_game(cfg);
    const auto rows = calibration_scores(trace, 0);
    REQUIRE_FALSE(rows.empty());
    for (const auto& row : rows) {
        CHECK(row.score >= 0.0);
        CHECK(row.length == (std::size_t{1} << row.r));
    }
}

TEST_CASE("aggregate throughput and exploration counts on a hand-made trace") {
    RunTrace t = single_player_trace({1, 1, 0, 1});
    t.player[0].phase = {Phase::ExploreRandom, Phase::Exploit, Phase::ExploreBest, Phase::ExploreRandom};
    CHECK(aggregate_throughput(t, {2, 4}) == std::vector<double>{1.0, 0.75});
    const ExplorationStats s = exploration_stats(t, 0, 4);
    CHECK(s.exploration_trials == 3);
    CHECK(s.random_pulls == std::vector<std::size_t>{0, 2});
    CHECK(joint_visits(t, 3) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("reference curves") {
    for (std::size_t D = 2; D < 10; ++D)
        for (double T : {3.0, 10.0, 1e3, 1e6}) CHECK(forecaster_rate_bound(D + 1, T) > forecaster_rate_bound(D, T));
    const double n = 5000.0;
    CHECK(regression_rate(n, 2.0, 2.0) == doctest::Approx(std::cbrt(std::log(n) / n)));
    for (std::size_t M : {1, 2, 4})
        for (std::size_t K : {1, 2, 4}) {
            const double B = expected_profile_samples(10, 0.05, M, K) / (10.0 * 11.0 / 2.0);
            CHECK(B < 1.0);
            CHECK(B == doctest::Approx(0.95 / std::pow(double(M), double(K))));
        }
    CHECK(geometric_checkpoints(1000, 8) == std::vector<std::size_t>{256, 512, 1000});
}
