#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "calband/error.hpp"
#include "calband/lp.hpp"

namespace calband {

Vector project_l2_onto_l1_ball(std::span<const double> v, double radius) {
    Vector w(v.begin(), v.end());
    if (radius <= 0.0) {
        std::fill(w.begin(), w.end(), 0.0);
        return w;
    }
    if (l1_norm(v) <= radius) return w;

    // Soft threshold at the level theta where the shrunk vector has l1 norm = radius.
    Vector mags(v.size());
    std::transform(v.begin(), v.end(), mags.begin(), [](double x) { return std::abs(x); });
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < mags.size(); ++j) {
        cumulative += mags[j];
        const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
        if (mags[j] - candidate > 0.0) theta = candidate;
    }
    for (double& x : w) {
        const double shrunk = std::max(std::abs(x) - theta, 0.0);
        x = std::copysign(shrunk, x);
    }
    const double norm = l1_norm(w);
    if (norm > radius) {
        const double s = radius / norm;
        for (double& x : w) x *= s;
    }
    return w;
}

std::uint32_t lattice_resolution(std::size_t dimension, double eps) {
    const double n = std::ceil(static_cast<double>(dimension) / eps - 1e-9);
    return static_cast<std::uint32_t>(std::max(1.0, n));
}

double lattice_size(std::size_t dimension, std::uint32_t resolution) {
    // C(n + D - 1, D - 1) as a running product.
    double size = 1.0;
    for (std::size_t i = 1; i < dimension; ++i) {
        size = size * (static_cast<double>(resolution) + static_cast<double>(i)) / static_cast<double>(i);
        if (!std::isfinite(size)) return kInf;
    }
    return size < 9.0e15 ? std::round(size) : size;
}

LatticePoint nearest_lattice_point(std::span<const double> p, std::uint32_t resolution) {
    const std::size_t dim = p.size();
    double total = 0.0;
    for (double x : p) total += std::max(x, 0.0);
    LatticePoint counts(dim, 0);
    if (total <= 0.0) {
        counts[0] = resolution;
        return counts;
    }
    std::vector<double> frac(dim);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double target = std::max(p[i], 0.0) / total * resolution;
        const double base = std::floor(target);
        counts[i] = static_cast<std::uint32_t>(base);
        frac[i] = target - base;
        assigned += counts[i];
    }
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < resolution; ++k, ++assigned) ++counts[order[k % dim]];
    // Floating round-off can overshoot by one unit; take it from the smallest remainder.
    for (std::size_t k = dim; assigned > resolution; --k) {
        std::size_t i = order[(k - 1) % dim];
        if (counts[i] > 0) {
            --counts[i];
            --assigned;
        }
    }
    return counts;
}

Vector lattice_to_distribution(const LatticePoint& point) {
    const double n = std::accumulate(point.begin(), point.end(), 0.0);
    Vector p(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) p[i] = point[i] / n;
    return p;
}

std::vector<LatticePoint> simplex_lattice(std::size_t dimension, std::uint32_t resolution, std::size_t cap) {
    const double size = lattice_size(dimension, resolution);
    if (size > static_cast<double>(cap)) {
        throw Error(ErrorCode::GridTooLarge, "simplex lattice with D=" + std::to_string(dimension) +
                                                 ", n=" + std::to_string(resolution) + " exceeds cap of " +
                                                 std::to_string(cap) + " points");
    }
    std::vector<LatticePoint> out;
    out.reserve(static_cast<std::size_t>(size));
    LatticePoint current(dimension, 0);
    // Ascending lexicographic: each coordinate runs upward, the last takes the remainder.
    std::function<void(std::size_t, std::uint32_t)> fill = [&](std::size_t i, std::uint32_t left) {
        if (i + 1 == dimension) {
            current[i] = left;
            out.push_back(current);
            return;
        }
        for (std::uint32_t c = 0; c <= left; ++c) {
            current[i] = c;
            fill(i + 1, left - c);
        }
    };
    fill(0, resolution);
    return out;
}

std::vector<Vector> simplex_grid(std::size_t dimension, double eps, std::size_t cap) {
    if (dimension < 2 || !(eps > 0.0)) {
        throw Error(ErrorCode::DimensionMismatch, "simplex_grid needs D >= 2 and eps > 0");
    }
    const auto lattice = simplex_lattice(dimension, lattice_resolution(dimension, eps), cap);
    std::vector<Vector> grid;
    grid.reserve(lattice.size());
    for (const auto& point : lattice) grid.push_back(lattice_to_distribution(point));
    return grid;
}

}  // namespace calband
