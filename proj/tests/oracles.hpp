#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "calband/lp.hpp"

namespace oracle {

using calband::LinearProgram;
using calband::Vector;

inline Vector sample_simplex(std::mt19937_64& rng, std::size_t dim) {
    std::exponential_distribution<double> e(1.0);
    Vector p(dim);
    double s = 0.0;
    for (double& x : p) s += (x = e(rng));
    for (double& x : p) x /= s;
    return p;
}

inline Vector sample_l1_ball(std::mt19937_64& rng, std::size_t dim, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector p = sample_simplex(rng, dim);
    const double scale = radius * std::pow(u(rng), 1.0 / static_cast<double>(dim));
    for (double& x : p) x *= (u(rng) < 0.5 ? -scale : scale);
    return p;
}

/// Random LP over [0, 5]^n with m random <= rows, feasible at an interior point.
inline LinearProgram random_bounded_lp(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 5.0);
    auto lp = LinearProgram::with_variables(n);
    for (double& c : lp.objective) c = coef(rng);
    for (double& u : lp.upper) u = 5.0;
    Vector x0(n);
    for (double& x : x0) x = pos(rng);
    for (std::size_t i = 0; i < m; ++i) {
        Vector a(n);
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += (a[j] = coef(rng)) * x0[j];
        lp.add_le(a, ax + 0.5 * pos(rng));
    }
    return lp;
}

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<Vector> solve_square(std::vector<Vector> a, Vector b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

/// Optimum of a bounded inequality-form LP (finite bounds, no equalities) by
/// enumerating every basic solution.
inline std::optional<double> vertex_enumeration_optimum(const LinearProgram& lp) {
    const std::size_t n = lp.num_variables();
    std::vector<Vector> rows;
    Vector rhs;
    for (std::size_t i = 0; i < lp.ineq.rows(); ++i) {
        auto r = lp.ineq.row(i);
        rows.emplace_back(r.begin(), r.end());
        rhs.push_back(lp.ineq_rhs[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        Vector lo(n, 0.0), hi(n, 0.0);
        lo[j] = -1.0;
        hi[j] = 1.0;
        rows.push_back(lo);
        rhs.push_back(-lp.lower[j]);
        rows.push_back(hi);
        rhs.push_back(lp.upper[j]);
    }
    const std::size_t total = rows.size();
    std::optional<double> best;
    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    for (;;) {
        std::vector<Vector> a;
        Vector b;
        for (std::size_t i : pick) {
            a.push_back(rows[i]);
            b.push_back(rhs[i]);
        }
        if (auto x = solve_square(a, b)) {
            bool feasible = true;
            for (std::size_t i = 0; i < total && feasible; ++i) {
                double ax = 0.0;
                for (std::size_t j = 0; j < n; ++j) ax += rows[i][j] * (*x)[j];
                feasible = ax <= rhs[i] + 1e-9;
            }
            if (feasible) {
                double obj = 0.0;
                for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * (*x)[j];
                if (!best || obj < *best) best = obj;
            }
        }
        // Next n-combination of [0, total).
        std::size_t k = n;
        while (k > 0 && pick[k - 1] == total - n + (k - 1)) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t i = k; i < n; ++i) pick[i] = pick[i - 1] + 1;
    }
    return best;
}

/// l2-nearest point of the l1 ball found by successively refined grid search.
inline Vector grid_search_l1_projection(const Vector& v, double radius) {
    const std::size_t dim = v.size();
    Vector center(dim, 0.0);
    double half_width = radius;
    const int steps = 40;
    for (int level = 0; level < 5; ++level) {
        const double h = 2.0 * half_width / steps;
        Vector best = center;
        double best_d = std::numeric_limits<double>::infinity();
        std::vector<int> idx(dim, 0);
        for (;;) {
            Vector p(dim);
            double n1 = 0.0, d = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                p[i] = center[i] - half_width + h * idx[i];
                n1 += std::abs(p[i]);
                d += (p[i] - v[i]) * (p[i] - v[i]);
            }
            if (n1 <= radius + 1e-12 && d < best_d) {
                best_d = d;
                best = p;
            }
            std::size_t k = 0;
            while (k < dim && ++idx[k] > steps) idx[k++] = 0;
            if (k == dim) break;
        }
        center = best;
        half_width = 2.0 * h;
    }
    return center;
}

}  // namespace oracle
