#include "calband/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

#include "calband/error.hpp"

namespace calband {

BlackwellResult blackwell_strategy(const std::vector<Vector>& points, const std::vector<Vector>& blocks, double eps,
                                   bool zero_column, BlackwellObjective objective) {
    const std::size_t columns = points.size();
    if (blocks.size() != columns) throw Error(ErrorCode::DimensionMismatch, "one regret block per forecast point");
    const std::size_t total = columns + (zero_column ? 1 : 0);
    BlackwellResult result;
    if (total == 0) throw Error(ErrorCode::DimensionMismatch, "blackwell_strategy needs at least one column");
    const std::size_t dim = columns ? points.front().size() : 0;

    Vector u;
    u.reserve(columns * dim);
    for (const auto& b : blocks) u.insert(u.end(), b.begin(), b.end());
    const Vector projected = project_l2_onto_l1_ball(u, eps);
    Vector residual(u.size());
    bool any = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        residual[i] = u[i] - projected[i];
        any = any || residual[i] != 0.0;
    }
    if (!any) {
        result.inside = true;
        result.weights.assign(total, 1.0 / static_cast<double>(total));
        return result;
    }
    const double offset = dot(residual, projected);

    std::vector<double> lp_dot(columns);
    for (std::size_t q = 0; q < columns; ++q) {
        lp_dot[q] = dot(std::span<const double>(residual.data() + q * dim, dim), points[q]);
    }
    auto coefficient = [&](std::size_t q, std::size_t d) { return lp_dot[q] - residual[q * dim + d]; };

    LpSolution sol;
    if (zero_column && objective == BlackwellObjective::FewestNewPoints) {
        // Admissible strategies with the least weight on unused lattice points.
        auto lp = LinearProgram::with_variables(total);
        lp.objective[columns] = 1.0;
        Vector row(total, 0.0);
        for (std::size_t d = 0; d < dim; ++d) {
            for (std::size_t q = 0; q < columns; ++q) row[q] = coefficient(q, d);
            lp.add_le(row, offset);
        }
        lp.add_eq(Vector(total, 1.0), 1.0);
        sol = solve_lp(lp);
    }
    if (sol.status != LpStatus::Optimal) {
        // Variables: psi_0..psi_{total-1}, s (free). minimize s
        // s.t. for every outcome d: sum_q psi_q (L_q.p_q - L_{q,d}) - s <= offset, sum psi = 1.
        auto lp = LinearProgram::with_variables(total + 1);
        lp.objective[total] = 1.0;
        lp.lower[total] = -kInf;
        Vector row(total + 1, 0.0);
        for (std::size_t d = 0; d < dim; ++d) {
            for (std::size_t q = 0; q < columns; ++q) row[q] = coefficient(q, d);
            row[total] = -1.0;
            lp.add_le(row, offset);
        }
        Vector ones(total + 1, 1.0);
        ones[total] = 0.0;
        lp.add_eq(ones, 1.0);
        sol = solve_lp(lp);
    }
    if (sol.status != LpStatus::Optimal) {
        throw Error(ErrorCode::NumericalBreakdown, std::string("Blackwell program ended ") + to_string(sol.status));
    }
    double worst = -kInf;
    for (std::size_t d = 0; d < dim; ++d) {
        double v = 0.0;
        for (std::size_t q = 0; q < columns; ++q) v += sol.x[q] * coefficient(q, d);
        worst = std::max(worst, v);
    }
    result.slack = worst - offset;
    if (result.slack > tol::kApproachability) {
        throw Error(ErrorCode::ApproachabilityViolated, "optimal slack " + std::to_string(result.slack));
    }
    result.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(total));
    double sum = 0.0;
    for (double& w : result.weights) sum += (w = std::max(w, 0.0));
    for (double& w : result.weights) w /= sum;
    return result;
}

double Forecaster::period_eps(unsigned r, std::size_t outcomes) {
    return std::pow(2.0, -static_cast<double>(r) / static_cast<double>(outcomes + 1));
}

Forecaster::Forecaster(std::size_t outcomes, ForecasterOptions options) : outcomes_(outcomes), options_(options) {
    if (outcomes < 2) throw Error(ErrorCode::DimensionMismatch, "forecaster needs at least two outcomes");
    period_counts_.assign(outcomes_, 0.0);
    previous_counts_.assign(outcomes_, 0.0);
    start_period(1);
    sequence_ = 0;
    set_uniform();
}

void Forecaster::start_period(unsigned r) {
    r_ = r;
    ++sequence_;
    t_ = 0;
    eps_ = period_eps(r, outcomes_);
    resolution_ = lattice_resolution(outcomes_, eps_);
    grid_size_ = lattice_size(outcomes_, resolution_);
    switch (options_.mode) {
        case LatticeMode::Explicit: explicit_ = true; break;
        case LatticeMode::Implicit: explicit_ = false; break;
        case LatticeMode::Auto: explicit_ = grid_size_ <= static_cast<double>(options_.explicit_cap); break;
    }
    points_.clear();
    distributions_.clear();
    index_.clear();
    if (explicit_) {
        points_ = simplex_lattice(outcomes_, resolution_, options_.grid_cap);
        distributions_.reserve(points_.size());
        for (std::size_t q = 0; q < points_.size(); ++q) {
            distributions_.push_back(lattice_to_distribution(points_[q]));
            index_.emplace(points_[q], q);
        }
    }
    sums_.assign(points_.size() * outcomes_, 0.0);
    used_.assign(points_.size(), 0);
    used_list_.clear();
    if (std::any_of(period_counts_.begin(), period_counts_.end(), [](double c) { return c > 0.0; })) {
        previous_counts_ = period_counts_;
    }
    std::fill(period_counts_.begin(), period_counts_.end(), 0.0);
    period_max_slack_ = 0.0;
    period_lp_solves_ = 0;
}

std::size_t Forecaster::column_of(const LatticePoint& point) {
    if (auto it = index_.find(point); it != index_.end()) return it->second;
    const std::size_t q = points_.size();
    points_.push_back(point);
    distributions_.push_back(lattice_to_distribution(point));
    index_.emplace(point, q);
    sums_.resize(sums_.size() + outcomes_, 0.0);
    used_.push_back(0);
    psi_.push_back(0.0);
    return q;
}

Vector Forecaster::recent_frequencies() const {
    Vector target = period_counts_;
    double mass = 0.0;
    for (double c : target) mass += c;
    if (mass == 0.0) {
        target = previous_counts_;
        for (double c : target) mass += c;
    }
    if (mass == 0.0) target.assign(outcomes_, 1.0);
    return target;
}

std::size_t Forecaster::fresh_column() {
    // Not-yet-used lattice point nearest the recent outcome frequencies.
    const Vector target = recent_frequencies();

    auto unused = [&](const LatticePoint& p) {
        auto it = index_.find(p);
        return it == index_.end() || !used_[it->second];
    };
    const LatticePoint start = nearest_lattice_point(target, resolution_);
    std::deque<LatticePoint> queue{start};
    std::set<LatticePoint> seen{start};
    while (!queue.empty()) {
        LatticePoint p = std::move(queue.front());
        queue.pop_front();
        if (unused(p)) return column_of(p);
        for (std::size_t i = 0; i < outcomes_; ++i) {
            if (p[i] == 0) continue;
            for (std::size_t j = 0; j < outcomes_; ++j) {
                if (j == i) continue;
                LatticePoint next = p;
                --next[i];
                ++next[j];
                if (seen.insert(next).second) queue.push_back(std::move(next));
            }
        }
    }
    throw Error(ErrorCode::NumericalBreakdown, "every lattice point has been used");
}

void Forecaster::set_uniform() {
    if (!explicit_ && points_.empty()) fresh_column();
    psi_.assign(points_.size(), 1.0 / static_cast<double>(points_.size()));
}

void Forecaster::set_psi(Vector psi) {
    if (psi.size() != points_.size()) throw Error(ErrorCode::DimensionMismatch, "psi must cover every column");
    psi_ = std::move(psi);
}

Forecast Forecaster::emit(Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t q = 0;
    std::size_t last_positive = 0;
    for (; q < psi_.size(); ++q) {
        if (psi_[q] <= 0.0) continue;
        last_positive = q;
        acc += psi_[q];
        if (u < acc) break;
    }
    if (q == psi_.size()) q = last_positive;
    pending_ = q;
    return Forecast{distributions_[q], q, points_[q]};
}

void Forecaster::observe(std::size_t outcome) {
    if (outcome >= outcomes_) {
        throw Error(ErrorCode::OutcomeOutOfRange,
                    "outcome " + std::to_string(outcome) + " not in [0, " + std::to_string(outcomes_) + ")");
    }
    if (!pending_) throw std::logic_error("Forecaster::observe called without an emitted forecast");
    const std::size_t q = *pending_;
    pending_.reset();

    double* block = sums_.data() + q * outcomes_;
    const Vector& p = distributions_[q];
    for (std::size_t i = 0; i < outcomes_; ++i) block[i] += p[i];
    block[outcome] -= 1.0;
    if (!used_[q]) {
        used_[q] = 1;
        used_list_.push_back(q);
    }
    ++t_;
    period_counts_[outcome] += 1.0;

    if (t_ < period_length()) {
        recompute_psi();
        return;
    }

    PeriodTelemetry row;
    row.sequence = sequence_;
    row.r = r_;
    row.eps = eps_;
    row.length = t_;
    row.regret_norm = regret_norm();
    row.reset = row.regret_norm > eps_;
    row.max_slack = period_max_slack_;
    row.lp_solves = period_lp_solves_;
    row.grid_size = grid_size_;
    row.columns = used_list_.size();
    telemetry_.push_back(row);

    unsigned next = r_ + 1;
    if (row.reset) {
        ++resets_;
        if (options_.on_failure == PeriodFailure::Reset) {
            start_period(1);
            set_uniform();
            return;
        }
        if (options_.on_failure == PeriodFailure::Retry) next = r_;
    }

    // Carry the final strategy onto the finer lattice: each old point's mass
    // moves to its nearest new point, then mixes with uniform.
    std::vector<std::pair<LatticePoint, double>> carried;
    for (std::size_t c = 0; c < psi_.size(); ++c) {
        if (psi_[c] > 0.0) carried.emplace_back(points_[c], psi_[c]);
    }
    std::vector<Vector> old_distributions;
    for (const auto& [point, w] : carried) old_distributions.push_back(lattice_to_distribution(point));
    start_period(next);
    Vector mapped;
    for (std::size_t i = 0; i < carried.size(); ++i) {
        const std::size_t col = column_of(nearest_lattice_point(old_distributions[i], resolution_));
        if (mapped.size() < points_.size()) mapped.resize(points_.size(), 0.0);
        mapped[col] += carried[i].second;
    }
    set_uniform();
    mapped.resize(points_.size(), 0.0);
    const double keep = options_.carry_weight;
    for (std::size_t c = 0; c < psi_.size(); ++c) psi_[c] = keep * mapped[c] + (1.0 - keep) * psi_[c];
}

void Forecaster::recompute_psi() {
    std::vector<Vector> points;
    std::vector<Vector> blocks;
    points.reserve(used_list_.size());
    blocks.reserve(used_list_.size());
    for (std::size_t q : used_list_) {
        points.push_back(distributions_[q]);
        blocks.push_back(regret_block(q));
    }
    const bool zero_column = static_cast<double>(used_list_.size()) < grid_size_;
    const BlackwellResult step = blackwell_strategy(points, blocks, eps_, zero_column, options_.objective);
    ++period_lp_solves_;
    period_max_slack_ = std::max(period_max_slack_, step.slack);
    max_slack_overall_ = std::max(max_slack_overall_, step.slack);

    if (step.inside) {
        // Every strategy is admissible; forecast the recent outcome frequencies.
        const std::size_t q = column_of(nearest_lattice_point(recent_frequencies(), resolution_));
        psi_.assign(points_.size(), 0.0);
        psi_[q] = 1.0;
        return;
    }
    const double zero_weight = zero_column ? step.weights.back() : 0.0;
    std::optional<std::size_t> fresh;
    if (zero_weight > 0.0) fresh = fresh_column();
    psi_.assign(points_.size(), 0.0);
    for (std::size_t k = 0; k < used_list_.size(); ++k) psi_[used_list_[k]] = step.weights[k];
    if (fresh) psi_[*fresh] += zero_weight;
}

Vector Forecaster::regret_block(std::size_t q) const {
    Vector b(outcomes_, 0.0);
    if (t_ == 0 || q >= points_.size()) return b;
    const double inv = 1.0 / static_cast<double>(t_);
    for (std::size_t i = 0; i < outcomes_; ++i) b[i] = sums_[q * outcomes_ + i] * inv;
    return b;
}

double Forecaster::regret_norm() const {
    if (t_ == 0) return 0.0;
    double s = 0.0;
    for (std::size_t q : used_list_) {
        for (std::size_t i = 0; i < outcomes_; ++i) s += std::abs(sums_[q * outcomes_ + i]);
    }
    return s / static_cast<double>(t_);
}

}  // namespace calband
