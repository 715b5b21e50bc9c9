#include <algorithm>
#include <cmath>
#include <string>

#include "calband/error.hpp"
#include "calband/lp.hpp"

namespace calband {

void Matrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && data_.empty()) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "row of length " + std::to_string(values.size()) + " appended to matrix with " +
                        std::to_string(cols_) + " columns");
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

LinearProgram LinearProgram::with_variables(std::size_t n) {
    LinearProgram lp;
    lp.objective.assign(n, 0.0);
    lp.lower.assign(n, 0.0);
    lp.upper.assign(n, kInf);
    lp.ineq = Matrix(0, n);
    lp.eq = Matrix(0, n);
    return lp;
}

void LinearProgram::add_le(std::span<const double> row, double rhs) {
    ineq.append_row(row);
    ineq_rhs.push_back(rhs);
}

void LinearProgram::add_eq(std::span<const double> row, double rhs) {
    eq.append_row(row);
    eq_rhs.push_back(rhs);
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "Optimal";
        case LpStatus::Infeasible: return "Infeasible";
        case LpStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

namespace {

void validate(const LinearProgram& lp) {
    const std::size_t n = lp.num_variables();
    auto fail = [](const std::string& what) { throw Error(ErrorCode::DimensionMismatch, what); };
    if (n == 0) fail("linear program has no variables");
    if (lp.lower.size() != n || lp.upper.size() != n) fail("bound vectors do not match variable count");
    if (lp.ineq.rows() > 0 && lp.ineq.cols() != n) fail("inequality matrix column count");
    if (lp.eq.rows() > 0 && lp.eq.cols() != n) fail("equality matrix column count");
    if (lp.ineq.rows() != lp.ineq_rhs.size()) fail("inequality rhs length");
    if (lp.eq.rows() != lp.eq_rhs.size()) fail("equality rhs length");
    for (std::size_t j = 0; j < n; ++j) {
        if (!(lp.lower[j] <= lp.upper[j])) fail("lower bound exceeds upper bound at variable " + std::to_string(j));
        if (lp.lower[j] == kInf || lp.upper[j] == -kInf) fail("empty bound interval at variable " + std::to_string(j));
    }
    for (double b : lp.ineq_rhs)
        if (!std::isfinite(b)) fail("non-finite inequality rhs");
    for (double f : lp.eq_rhs)
        if (!std::isfinite(f)) fail("non-finite equality rhs");
}

// x_j = offset + sum over its columns of sign * y_col, y >= 0.
struct VariableMap {
    double offset = 0.0;
    std::size_t col = 0;
    double sign = 1.0;
    bool split = false;  // free variable: second column col + 1 with sign -1
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows + 1, cols + 1) {}

    double& at(std::size_t r, std::size_t c) { return t_(r, c); }
    double at(std::size_t r, std::size_t c) const { return t_(r, c); }
    double& rhs(std::size_t r) { return t_(r, cols_); }
    double& cost(std::size_t c) { return t_(rows_, c); }
    double& neg_objective() { return t_(rows_, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const std::size_t width = cols_ + 1;
        auto prow = t_.row(pr);
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            auto row = t_.row(r);
            const double factor = row[pc];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < width; ++c) {
                if (prow[c] != 0.0) row[c] -= factor * prow[c];
            }
            row[pc] = 0.0;
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    Matrix t_;
};

enum class PhaseResult { Optimal, Unbounded };

// Lexicographic comparison of rows r and s of [rhs | B^-1], each scaled by its
// pivot-column entry. The columns that formed the starting identity basis hold
// B^-1, so the comparison needs no extra state. Distinct rows never compare
// equal because B^-1 is nonsingular, which rules out cycling.
bool lex_less(const Tableau& tab, const std::vector<std::size_t>& identity, std::size_t r, std::size_t s,
              std::size_t enter) {
    const double ar = tab.at(r, enter), as = tab.at(s, enter);
    for (std::size_t col : identity) {
        const double x = tab.at(r, col) / ar, y = tab.at(s, col) / as;
        if (x < y - 1e-12) return true;
        if (x > y + 1e-12) return false;
    }
    return r < s;
}

// Sets the rhs column to B^-1 b0 and the objective entry to match, undoing
// any perturbation of the basic values.
void restore_rhs(Tableau& tab, const std::vector<std::size_t>& basis, const std::vector<std::size_t>& identity,
                 const Vector& b0, const Vector& phase_cost) {
    double obj = 0.0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
        double v = 0.0;
        for (std::size_t i = 0; i < identity.size(); ++i) v += tab.at(r, identity[i]) * b0[i];
        tab.rhs(r) = v;
        obj += phase_cost[basis[r]] * v;
    }
    tab.neg_objective() = -obj;
}

// Dual simplex pivots from a dual-feasible basis until the basic values are
// nonnegative. Returns false when some row admits no entering column.
bool dual_repair(Tableau& tab, std::vector<std::size_t>& basis, std::size_t allowed_cols, std::size_t& iterations,
                 std::size_t budget) {
    for (;;) {
        std::size_t leave = tab.rows();
        double worst = -tol::kFeasibility;
        for (std::size_t r = 0; r < tab.rows(); ++r) {
            if (tab.rhs(r) < worst) {
                worst = tab.rhs(r);
                leave = r;
            }
        }
        if (leave == tab.rows()) return true;
        std::size_t enter = allowed_cols;
        double best = kInf;
        for (std::size_t c = 0; c < allowed_cols; ++c) {
            const double a = tab.at(leave, c);
            if (a >= -tol::kPivot) continue;
            const double ratio = std::max(tab.cost(c), 0.0) / -a;
            if (ratio < best) {
                best = ratio;
                enter = c;
            }
        }
        if (enter == allowed_cols) return false;
        tab.pivot(leave, enter);
        basis[leave] = enter;
        if (++iterations > budget) {
            throw Error(ErrorCode::NumericalBreakdown,
                        "simplex iteration budget of " + std::to_string(budget) + " exhausted");
        }
    }
}

// Minimizes the objective row over columns [0, allowed_cols). basis[r] holds the
// basic column of row r; identity[r] is the column that was basic in row r at
// the start, b0 the starting rhs and phase_cost the cost vector of this phase.
// A degenerate streak first perturbs the basic values once; a second streak
// falls back to Bland's rule with lexicographic ties.
PhaseResult run_phase(Tableau& tab, std::vector<std::size_t>& basis, const std::vector<std::size_t>& identity,
                      const Vector& b0, const Vector& phase_cost, std::size_t allowed_cols, std::size_t& iterations,
                      std::size_t budget) {
    constexpr std::size_t kDegenerateStreakLimit = 50;
    bool bland = false;
    bool perturbed = false, perturb_used = false;
    std::size_t degenerate_streak = 0;
    for (;;) {
        std::size_t enter = allowed_cols;
        double best = -tol::kOptimality;
        for (std::size_t c = 0; c < allowed_cols; ++c) {
            const double d = tab.cost(c);
            if (d < best) {
                enter = c;
                if (bland) break;
                best = d;
            }
        }
        if (enter == allowed_cols) {
            if (!perturbed) return PhaseResult::Optimal;
            perturbed = false;
            restore_rhs(tab, basis, identity, b0, phase_cost);
            if (!dual_repair(tab, basis, allowed_cols, iterations, budget)) {
                throw Error(ErrorCode::NumericalBreakdown, "basis lost feasibility after removing the perturbation");
            }
            continue;
        }

        // Harris two-pass ratio test: bound the step with every row relaxed by
        // kFeasibility, then take the largest pivot among rows within that step.
        // In Bland mode, exact ties go by the lexicographic rule instead.
        std::size_t leave = tab.rows();
        double best_ratio = kInf;
        if (!bland) {
            double step = kInf;
            for (std::size_t r = 0; r < tab.rows(); ++r) {
                const double a = tab.at(r, enter);
                if (a > tol::kPivot) step = std::min(step, (std::max(tab.rhs(r), 0.0) + tol::kFeasibility) / a);
            }
            double best_pivot = 0.0;
            for (std::size_t r = 0; r < tab.rows(); ++r) {
                const double a = tab.at(r, enter);
                if (a <= tol::kPivot) continue;
                const double ratio = std::max(tab.rhs(r), 0.0) / a;
                if (ratio <= step && a > best_pivot) {
                    best_pivot = a;
                    best_ratio = ratio;
                    leave = r;
                }
            }
        } else {
            for (std::size_t r = 0; r < tab.rows(); ++r) {
                const double a = tab.at(r, enter);
                if (a <= tol::kPivot) continue;
                const double ratio = std::max(tab.rhs(r), 0.0) / a;
                if (ratio < best_ratio - 1e-12) {
                    best_ratio = ratio;
                    leave = r;
                } else if (ratio <= best_ratio + 1e-12 && lex_less(tab, identity, r, leave, enter)) {
                    best_ratio = std::min(ratio, best_ratio);
                    leave = r;
                }
            }
        }
        if (leave == tab.rows()) return PhaseResult::Unbounded;

        const double gain = -tab.cost(enter) * best_ratio;
        if (gain <= 1e-9 * (1.0 + std::abs(tab.neg_objective()))) {
            if (++degenerate_streak >= kDegenerateStreakLimit) {
                degenerate_streak = 0;
                if (perturb_used) {
                    bland = true;
                } else {
                    // Distinct tiny offsets on every basic value break the ties.
                    perturb_used = perturbed = true;
                    for (std::size_t r = 0; r < tab.rows(); ++r) {
                        const double jitter = 1.0 + static_cast<double>((r * 7919) % 101) / 101.0;
                        tab.rhs(r) += 1e-7 * jitter * (1.0 + std::abs(tab.rhs(r)));
                    }
                }
            }
        } else {
            degenerate_streak = 0;
            bland = false;
        }
        tab.pivot(leave, enter);
        basis[leave] = enter;
        if (++iterations > budget) {
            throw Error(ErrorCode::NumericalBreakdown,
                        "simplex iteration budget of " + std::to_string(budget) + " exhausted");
        }
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    validate(lp);
    const std::size_t n = lp.num_variables();

    std::vector<VariableMap> vars(n);
    std::size_t ny = 0;
    std::vector<std::pair<std::size_t, double>> upper_rows;  // (column, width)
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = lp.lower[j];
        const double hi = lp.upper[j];
        VariableMap& v = vars[j];
        v.col = ny;
        if (std::isfinite(lo)) {
            v.offset = lo;
            v.sign = 1.0;
            if (std::isfinite(hi)) upper_rows.emplace_back(ny, hi - lo);
            ny += 1;
        } else if (std::isfinite(hi)) {
            v.offset = hi;
            v.sign = -1.0;
            ny += 1;
        } else {
            v.split = true;
            ny += 2;
        }
    }

    const std::size_t m_le = lp.ineq.rows() + upper_rows.size();
    const std::size_t m_eq = lp.eq.rows();
    const std::size_t m = m_le + m_eq;

    // Standard-form rows over y, before slack/artificial columns.
    Matrix rows(m, ny);
    Vector rhs(m, 0.0);
    auto load = [&](std::span<const double> a, double b, std::size_t r) {
        double shifted = b;
        for (std::size_t j = 0; j < n; ++j) {
            const double coef = a[j];
            if (coef == 0.0) continue;
            const VariableMap& v = vars[j];
            shifted -= coef * v.offset;
            rows(r, v.col) += coef * v.sign;
            if (v.split) rows(r, v.col + 1) -= coef;
        }
        rhs[r] = shifted;
    };
    std::size_t r = 0;
    for (std::size_t i = 0; i < lp.ineq.rows(); ++i, ++r) load(lp.ineq.row(i), lp.ineq_rhs[i], r);
    for (const auto& [col, width] : upper_rows) {
        rows(r, col) = 1.0;
        rhs[r] = width;
        ++r;
    }
    for (std::size_t i = 0; i < m_eq; ++i, ++r) load(lp.eq.row(i), lp.eq_rhs[i], r);

    // Columns: y (ny) | slacks (m_le) | artificials (one per row needing it).
    std::vector<bool> needs_artificial(m, false);
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        needs_artificial[i] = (i >= m_le) || rhs[i] < 0.0;
        if (needs_artificial[i]) ++n_art;
    }
    const std::size_t slack0 = ny;
    const std::size_t art0 = ny + m_le;
    const std::size_t ncols = art0 + n_art;

    Tableau tab(m, ncols);
    std::vector<std::size_t> basis(m);
    std::size_t next_art = art0;
    for (std::size_t i = 0; i < m; ++i) {
        const double flip = rhs[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < ny; ++c) tab.at(i, c) = flip * rows(i, c);
        if (i < m_le) tab.at(i, slack0 + i) = flip;
        tab.rhs(i) = flip * rhs[i];
        if (needs_artificial[i]) {
            tab.at(i, next_art) = 1.0;
            basis[i] = next_art++;
        } else {
            basis[i] = slack0 + i;
        }
    }

    const std::vector<std::size_t> identity = basis;
    Vector b0(m);
    for (std::size_t i = 0; i < m; ++i) b0[i] = tab.rhs(i);
    LpSolution sol;
    const std::size_t budget = 50 * (m + ncols) + 1000;

    if (n_art > 0) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!needs_artificial[i]) continue;
            for (std::size_t c = 0; c < art0; ++c) tab.cost(c) -= tab.at(i, c);
            tab.neg_objective() -= tab.rhs(i);
        }
        Vector phase1_cost(ncols, 0.0);
        std::fill(phase1_cost.begin() + static_cast<std::ptrdiff_t>(art0), phase1_cost.end(), 1.0);
        run_phase(tab, basis, identity, b0, phase1_cost, ncols, sol.iterations, budget);
        double scale = 1.0;
        for (double b : rhs) scale = std::max(scale, std::abs(b));
        if (-tab.neg_objective() > tol::kFeasibility * scale) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Drive zero-level artificials out of the basis where a real column can replace them.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < art0) continue;
            std::size_t best = art0;
            double mag = tol::kPivot;
            for (std::size_t c = 0; c < art0; ++c) {
                if (std::abs(tab.at(i, c)) > mag) {
                    mag = std::abs(tab.at(i, c));
                    best = c;
                }
            }
            if (best < art0) {
                tab.pivot(i, best);
                basis[i] = best;
            }
        }
    }

    // Phase 2 costs over y.
    Vector cy(ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const VariableMap& v = vars[j];
        cy[v.col] += lp.objective[j] * v.sign;
        if (v.split) cy[v.col + 1] -= lp.objective[j];
    }
    for (std::size_t c = 0; c < ncols; ++c) tab.cost(c) = cy[c];
    tab.neg_objective() = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = cy[basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c < ncols; ++c) tab.cost(c) -= cb * tab.at(i, c);
        tab.neg_objective() -= cb * tab.rhs(i);
    }

    if (run_phase(tab, basis, identity, b0, cy, art0, sol.iterations, budget) == PhaseResult::Unbounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    Vector y(ncols, 0.0);
    for (std::size_t i = 0; i < m; ++i) y[basis[i]] = std::max(tab.rhs(i), 0.0);
    sol.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const VariableMap& v = vars[j];
        sol.x[j] = v.split ? y[v.col] - y[v.col + 1] : v.offset + v.sign * y[v.col];
    }
    sol.objective_value = dot(lp.objective, sol.x);
    sol.status = LpStatus::Optimal;
    // Accumulated round-off in the tableau can leave the reported vertex
    // infeasible; report that instead of a wrong optimum.
    double scale = 1.0;
    for (double b : rhs) scale = std::max(scale, std::abs(b));
    if (const double v = max_violation(lp, sol.x); v > 1e-7 * scale) {
        throw Error(ErrorCode::NumericalBreakdown, "simplex result violates constraints by " + std::to_string(v));
    }
    return sol;
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
    double worst = 0.0;
    auto scaled = [](std::span<const double> a, double excess) {
        double norm = 0.0;
        for (double v : a) norm = std::max(norm, std::abs(v));
        return excess / (1.0 + norm);
    };
    for (std::size_t i = 0; i < lp.ineq.rows(); ++i) {
        const auto a = lp.ineq.row(i);
        worst = std::max(worst, scaled(a, dot(a, x) - lp.ineq_rhs[i]));
    }
    for (std::size_t i = 0; i < lp.eq.rows(); ++i) {
        const auto a = lp.eq.row(i);
        worst = std::max(worst, scaled(a, std::abs(dot(a, x) - lp.eq_rhs[i])));
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        worst = std::max(worst, lp.lower[j] - x[j]);
        worst = std::max(worst, x[j] - lp.upper[j]);
    }
    return worst;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace calband
