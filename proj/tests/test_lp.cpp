#include <algorithm>
#include <cmath>
#include <random>

#include "calband/error.hpp"
#include "calband/lp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace calband;

TEST_CASE("single-variable vertex") {
    auto lp = LinearProgram::with_variables(1);
    lp.objective = {-1.0};
    lp.add_le(std::vector{1.0}, 1.0);
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.objective_value == doctest::Approx(-1.0));
}

TEST_CASE("objective constant on the feasible set") {
    auto lp = LinearProgram::with_variables(2);
    lp.objective = {1.0, 1.0};
    lp.add_eq(std::vector{1.0, 1.0}, 1.0);
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded programs are classified") {
    auto infeasible = LinearProgram::with_variables(1);
    infeasible.add_le(std::vector{1.0}, -1.0);
    CHECK(solve_lp(infeasible).status == LpStatus::Infeasible);

    auto unbounded = LinearProgram::with_variables(2);
    unbounded.objective = {-1.0, 0.0};
    unbounded.add_le(std::vector{-1.0, 1.0}, 1.0);
    CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("free and upper-bounded variables") {
    // max x + y with x free, y <= 2, x + y <= 3, x - y >= -5
    auto lp = LinearProgram::with_variables(2);
    lp.objective = {-1.0, -1.0};
    lp.lower = {-kInf, -kInf};
    lp.upper = {kInf, 2.0};
    lp.add_le(std::vector{1.0, 1.0}, 3.0);
    lp.add_le(std::vector{-1.0, 1.0}, 5.0);
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(-3.0));
    CHECK(max_violation(lp, sol.x) <= tol::kFeasibility);
}

TEST_CASE("dimension mismatch is reported") {
    auto lp = LinearProgram::with_variables(2);
    lp.lower = {0.0};
    CHECK_THROWS_AS(solve_lp(lp), Error);
    try {
        solve_lp(lp);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    auto zero = LinearProgram::with_variables(0);
    CHECK_THROWS_AS(solve_lp(zero), Error);
}

TEST_CASE("Beale's cycling example terminates") {
    auto lp = LinearProgram::with_variables(4);
    lp.objective = {-0.75, 20.0, -0.5, 6.0};
    lp.add_le(std::vector{0.25, -8.0, -1.0, 9.0}, 0.0);
    lp.add_le(std::vector{0.5, -12.0, -0.5, 3.0}, 0.0);
    lp.add_le(std::vector{0.0, 0.0, 1.0, 0.0}, 1.0);
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(-1.25));
}

TEST_CASE("random small LPs match vertex enumeration") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = oracle::random_bounded_lp(rng, 4, 6);
        const auto sol = solve_lp(inst);
        const auto best = oracle::vertex_enumeration_optimum(inst);
        REQUIRE(best.has_value());
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(std::abs(sol.objective_value - *best) <= 1e-8);
        CHECK(max_violation(inst, sol.x) <= tol::kFeasibility);
    }
}

TEST_CASE("solve_lp is deterministic") {
    std::mt19937_64 rng(7);
    const auto inst = oracle::random_bounded_lp(rng, 4, 6);
    const auto a = solve_lp(inst);
    const auto b = solve_lp(inst);
    CHECK(a.x == b.x);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("projection: points inside the ball are fixed") {
    const Vector v{0.2, -0.3, 0.1};
    CHECK(project_l2_onto_l1_ball(v, 1.0) == v);
}

TEST_CASE("projection: zero radius") {
    const auto w = project_l2_onto_l1_ball(std::vector{1.0, 0.0}, 0.0);
    CHECK(w == Vector{0.0, 0.0});
}

TEST_CASE("projection matches grid search") {
    const Vector v{0.8, -0.6, 0.1};
    const auto w = project_l2_onto_l1_ball(v, 1.0);
    const auto g = oracle::grid_search_l1_projection(v, 1.0);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(w[i] - g[i]) <= 1e-4);
    // Soft threshold at 0.2: (0.6, -0.4, 0).
    CHECK(w[0] == doctest::Approx(0.6));
    CHECK(w[1] == doctest::Approx(-0.4));
    CHECK(w[2] == doctest::Approx(0.0));
}

TEST_CASE("projection optimality against sampled ball points") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 1 + trial % 6;
        Vector v(dim);
        for (double& x : v) x = normal(rng);
        const double radius = 2.0 * unif(rng);
        const auto w = project_l2_onto_l1_ball(v, radius);
        REQUIRE(l1_norm(w) <= radius + tol::kProjection);
        auto dist2 = [&](const Vector& p) {
            double s = 0.0;
            for (std::size_t i = 0; i < dim; ++i) s += (p[i] - v[i]) * (p[i] - v[i]);
            return s;
        };
        const double best = dist2(w);
        for (int s = 0; s < 50; ++s) {
            Vector p = oracle::sample_l1_ball(rng, dim, radius);
            if (s % 2 == 1) {
                // Local perturbation of the answer, pulled back into the ball.
                for (std::size_t i = 0; i < dim; ++i) p[i] = w[i] + 0.01 * normal(rng);
                const double n1 = l1_norm(p);
                if (n1 > radius && n1 > 0.0)
                    for (double& x : p) x *= radius / n1;
            }
            CHECK(dist2(p) >= best - 1e-10);
        }
    }
}

TEST_CASE("simplex_grid examples") {
    const auto g = simplex_grid(2, 0.5);
    REQUIRE(g.size() == 5);
    const std::vector<Vector> expected{{0.0, 1.0}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1.0, 0.0}};
    CHECK(g == expected);

    const auto h = simplex_grid(2, 1.0);
    const std::vector<Vector> expected_h{{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}};
    CHECK(h == expected_h);

    for (std::size_t dim : {2u, 3u, 5u}) {
        for (const auto& p : simplex_grid(dim, 0.7)) {
            double s = 0.0;
            for (double x : p) s += x;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("simplex_grid cap") {
    CHECK(lattice_size(64, 65) > 1e30);
    try {
        simplex_grid(64, 0.99);
        FAIL("expected GridTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridTooLarge);
    }
    CHECK_THROWS_AS(simplex_grid(1, 0.5), Error);
}

TEST_CASE("lattice size matches enumeration") {
    for (std::size_t dim = 2; dim <= 5; ++dim)
        for (std::uint32_t n = 1; n <= 9; ++n)
            CHECK(lattice_size(dim, n) == static_cast<double>(simplex_lattice(dim, n).size()));
}

TEST_CASE("covering property of the grid") {
    std::mt19937_64 rng(5);
    for (auto [dim, eps] : {std::pair{2u, 0.5}, std::pair{3u, 0.4}, std::pair{4u, 0.3}, std::pair{2u, 0.05}}) {
        const auto grid = simplex_grid(dim, eps);
        for (int i = 0; i < 1000; ++i) {
            const auto p = oracle::sample_simplex(rng, dim);
            double best = kInf;
            for (const auto& q : grid) best = std::min(best, l1_distance(p, q));
            CHECK(best <= eps);
        }
    }
}

TEST_CASE("nearest lattice point is l1-nearest") {
    std::mt19937_64 rng(11);
    for (std::size_t dim : {2u, 3u, 4u}) {
        const std::uint32_t n = 7;
        const auto lattice = simplex_lattice(dim, n);
        for (int i = 0; i < 300; ++i) {
            const auto p = oracle::sample_simplex(rng, dim);
            const auto near = lattice_to_distribution(nearest_lattice_point(p, n));
            double best = kInf;
            for (const auto& q : lattice) best = std::min(best, l1_distance(p, lattice_to_distribution(q)));
            CHECK(l1_distance(p, near) <= best + 1e-12);
        }
    }
}

TEST_CASE("degenerate LPs with many rows through one vertex match vertex enumeration") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> pos(0, 2);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 2 + rep % 3, m = 6 + rep % 5;
        auto lp = LinearProgram::with_variables(n);
        for (double& u : lp.upper) u = 4.0;
        Vector x0(n);
        for (double& x : x0) x = pos(rng);
        for (double& c : lp.objective) c = coef(rng);
        for (std::size_t i = 0; i < m; ++i) {
            Vector a(n);
            double ax = 0.0;
            for (std::size_t j = 0; j < n; ++j) ax += (a[j] = coef(rng)) * x0[j];
            lp.add_le(a, ax);  // every row is tight at x0
        }
        const auto expected = oracle::vertex_enumeration_optimum(lp);
        REQUIRE(expected.has_value());
        const LpSolution sol = solve_lp(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(*expected).epsilon(1e-8));
        CHECK(max_violation(lp, sol.x) <= 1e-9);
    }
}
