#include "calband/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calband/error.hpp"

namespace calband {

std::vector<ConsistencyPoint> consistency_series(const RunTrace& trace, const OracleTable& oracle,
                                                 const std::vector<std::size_t>& checkpoints) {
    const std::size_t K = trace.players;
    std::vector<std::size_t> marks;
    for (std::size_t c : checkpoints) {
        if (c >= 1 && c <= trace.trials()) marks.push_back(c);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    std::vector<ConsistencyPoint> out;
    std::vector<double> num(K, 0.0), den(K, 0.0);
    std::size_t t = 0;
    for (std::size_t mark : marks) {
        for (; t < mark; ++t) {
            for (std::size_t k = 0; k < K; ++k) {
                const auto& p = trace.player[k];
                num[k] += oracle.at(k, p.arm[t], p.opponents[t]);
                den[k] += oracle.best(k, p.opponents[t]);
            }
        }
        ConsistencyPoint point;
        point.horizon = mark;
        point.numerator = num;
        point.denominator = den;
        for (std::size_t k = 0; k < K; ++k) {
            if (!(den[k] > 0.0)) {
                throw Error(ErrorCode::DegenerateDenominator,
                            "player " + std::to_string(k) + ": optimal reward sums to 0 by T = " + std::to_string(mark));
            }
            const double s = num[k] / den[k];
            if (s > 1.0) throw Error(ErrorCode::NumericalBreakdown, "consistency ratio above 1");
            point.S.push_back(s);
            point.regret.push_back((num[k] - den[k]) / static_cast<double>(mark));
        }
        out.push_back(std::move(point));
    }
    return out;
}

Vector empirical_frequencies(const RunTrace& trace, std::size_t begin, std::size_t end) {
    if (begin >= end || end > trace.trials()) {
        throw Error(ErrorCode::EmptyWindow, "window [" + std::to_string(begin) + ", " + std::to_string(end) +
                                                ") is empty or exceeds " + std::to_string(trace.trials()) + " trials");
    }
    const std::size_t n = trace.outcomes * trace.arms;
    Vector pi(n, 0.0);
    for (std::size_t t = begin; t < end; ++t) pi[trace.joint[t]] += 1.0;
    const double inv = 1.0 / static_cast<double>(end - begin);
    for (double& x : pi) x *= inv;
    return pi;
}

namespace {

// Row over joint profiles for the constraint "player k told to play i gains
// nothing by switching to j": sum_{m: m_k = i} pi(m) [f_k(i, m-k) - f_k(j, m-k)].
Vector ce_row(const OracleTable& oracle, std::size_t k, Arm i, Arm j) {
    const std::size_t K = oracle.players(), M = oracle.arms();
    const std::size_t n = oracle.outcomes() * M;
    Vector row(n, 0.0);
    for (std::size_t d = 0; d < oracle.outcomes(); ++d) {
        const JointProfile p = with_opponents(d, k, i, K, M);
        row[encode_joint(p, M)] = oracle.at(k, i, d) - oracle.at(k, j, d);
    }
    return row;
}

}  // namespace

double ce_violation(std::span<const double> pi, const OracleTable& oracle) {
    double worst = 0.0;
    for (std::size_t k = 0; k < oracle.players(); ++k) {
        for (Arm i = 0; i < oracle.arms(); ++i) {
            for (Arm j = 0; j < oracle.arms(); ++j) {
                if (i == j) continue;
                const Vector row = ce_row(oracle, k, i, j);
                worst = std::max(worst, -dot(row, pi));
            }
        }
    }
    return worst;
}

CeProjection nearest_correlated_equilibrium(std::span<const double> pi_hat, const OracleTable& oracle) {
    const std::size_t n = oracle.outcomes() * oracle.arms();
    if (pi_hat.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "pi_hat has " + std::to_string(pi_hat.size()) + " entries, expected " +
                                                      std::to_string(n));
    }
    // pi = pi_hat + e+ - e-, objective sum(e+ + e-). Some optimum has
    // min(e+, e-) = 0 in every cell, so pi >= 0 reduces to the bound
    // e- <= pi_hat, and e- is dropped where pi_hat = 0. Only the CE rows and
    // the mass row remain, which keeps the program far from degenerate.
    std::vector<std::size_t> support;
    for (std::size_t m = 0; m < n; ++m) {
        if (pi_hat[m] > 0.0) support.push_back(m);
    }
    const std::size_t vars = n + support.size();
    auto lp = LinearProgram::with_variables(vars);
    std::fill(lp.objective.begin(), lp.objective.end(), 1.0);
    for (std::size_t s = 0; s < support.size(); ++s) lp.upper[n + s] = pi_hat[support[s]];
    Vector row(vars, 0.0);
    for (std::size_t k = 0; k < oracle.players(); ++k) {
        for (Arm i = 0; i < oracle.arms(); ++i) {
            for (Arm j = 0; j < oracle.arms(); ++j) {
                if (i == j) continue;
                const Vector ce = ce_row(oracle, k, i, j);
                for (std::size_t m = 0; m < n; ++m) row[m] = -ce[m];
                for (std::size_t s = 0; s < support.size(); ++s) row[n + s] = ce[support[s]];
                lp.add_le(row, dot(ce, pi_hat));
            }
        }
    }
    std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n), 1.0);
    std::fill(row.begin() + static_cast<std::ptrdiff_t>(n), row.end(), -1.0);
    lp.add_eq(row, 0.0);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
        throw Error(ErrorCode::NumericalBreakdown, std::string("correlated-equilibrium program ended ") +
                                                       to_string(sol.status));
    }
    CeProjection out;
    out.distance = std::max(0.0, sol.objective_value);
    out.pi.assign(pi_hat.begin(), pi_hat.end());
    for (std::size_t m = 0; m < n; ++m) out.pi[m] += sol.x[m];
    for (std::size_t s = 0; s < support.size(); ++s) out.pi[support[s]] -= sol.x[n + s];
    for (double& x : out.pi) x = std::max(x, 0.0);
    return out;
}

double ce_distance(std::span<const double> pi_hat, const OracleTable& oracle) {
    return nearest_correlated_equilibrium(pi_hat, oracle).distance;
}

void CalibrationAccumulator::add(std::size_t sequence, unsigned r, const LatticePoint& point, std::size_t outcome) {
    if (sequence != current) {
        current = sequence;
        current_r = r;
        count = 0;
        blocks.clear();
    }
    const Vector p = lattice_to_distribution(point);
    auto it = std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) { return b.first == point; });
    if (it == blocks.end()) {
        blocks.emplace_back(point, Vector(outcomes, 0.0));
        it = std::prev(blocks.end());
    }
    for (std::size_t i = 0; i < outcomes; ++i) it->second[i] += p[i];
    it->second[outcome] -= 1.0;
    ++count;
    const std::size_t length = std::size_t{1} << r;
    if (count == length) {
        double total = 0.0;
        for (const auto& b : blocks) total += l1_norm(b.second);
        CalibrationRow row;
        row.sequence = sequence;
        row.r = r;
        row.eps = std::pow(2.0, -static_cast<double>(r) / static_cast<double>(outcomes + 1));
        row.length = length;
        row.score = total / static_cast<double>(length);
        rows.push_back(row);
    }
}

std::vector<CalibrationRow> calibration_scores(const RunTrace& trace, std::size_t player) {
    const auto& p = trace.player.at(player);
    CalibrationAccumulator acc(trace.outcomes);
    for (std::size_t t = 0; t < trace.trials(); ++t) {
        if (p.fc_r[t] == 0) continue;
        acc.add(p.fc_sequence[t], p.fc_r[t], p.fc_point[t], p.opponents[t]);
    }
    return acc.rows;
}

std::vector<double> aggregate_throughput(const RunTrace& trace, const std::vector<std::size_t>& checkpoints) {
    std::vector<double> out;
    for (std::size_t c : checkpoints) {
        if (c < 1 || c > trace.trials()) continue;
        double total = 0.0;
        for (const auto& p : trace.player) {
            double s = 0.0;
            for (std::size_t t = 0; t < c; ++t) s += p.reward[t];
            total += s / static_cast<double>(c);
        }
        out.push_back(total);
    }
    return out;
}

ExplorationStats exploration_stats(const RunTrace& trace, std::size_t player, std::size_t end) {
    ExplorationStats s;
    s.random_pulls.assign(trace.arms, 0);
    const auto& p = trace.player.at(player);
    end = std::min(end, trace.trials());
    for (std::size_t t = 0; t < end; ++t) {
        if (p.phase[t] == Phase::ExploreRandom) {
            ++s.exploration_trials;
            ++s.random_pulls[p.arm[t]];
        } else if (p.phase[t] == Phase::ExploreBest) {
            ++s.exploration_trials;
        }
    }
    return s;
}

std::vector<std::size_t> joint_visits(const RunTrace& trace, std::size_t end) {
    std::vector<std::size_t> visits(trace.outcomes * trace.arms, 0);
    end = std::min(end, trace.trials());
    for (std::size_t t = 0; t < end; ++t) ++visits[trace.joint[t]];
    return visits;
}

double forecaster_rate_bound(std::size_t outcomes, double T) {
    const double D = static_cast<double>(outcomes);
    return D * std::sqrt(std::log(T)) / std::pow(T, 1.0 / (D + 1.0));
}

double regression_rate(double n, double smoothness, double dimension) {
    return std::pow(std::log(n) / n, smoothness / (2.0 * smoothness + dimension));
}

double expected_profile_samples(unsigned R, double gamma, std::size_t arms, std::size_t players) {
    const double B = (1.0 - gamma) / std::pow(static_cast<double>(arms), static_cast<double>(players));
    return B * static_cast<double>(R) * static_cast<double>(R + 1) / 2.0;
}

std::vector<std::size_t> geometric_checkpoints(std::size_t horizon, unsigned lo) {
    std::vector<std::size_t> out;
    for (std::size_t c = std::size_t{1} << lo; c < horizon; c <<= 1) out.push_back(c);
    out.push_back(horizon);
    return out;
}

}  // namespace calband
