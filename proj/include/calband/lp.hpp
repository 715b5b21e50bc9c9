#pragma once

// Dense linear programming and the convex-geometry helpers the forecaster and
// the equilibrium metric are built on.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "calband/tolerances.hpp"

namespace calband {

using Vector = std::vector<double>;

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    /// Appends a row; the first row fixes the column count.
    void append_row(std::span<const double> values);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c.x  s.t.  A x <= b,  E x = f,  lo <= x <= hi.
struct LinearProgram {
    Vector objective;
    Matrix ineq;
    Vector ineq_rhs;
    Matrix eq;
    Vector eq_rhs;
    Vector lower;
    Vector upper;

    /// Program over n variables with bounds [0, +inf) and no constraints.
    static LinearProgram with_variables(std::size_t n);

    std::size_t num_variables() const noexcept { return objective.size(); }

    void add_le(std::span<const double> row, double rhs);
    void add_eq(std::span<const double> row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vector x;
    double objective_value = 0.0;
    std::size_t iterations = 0;
};

/// Two-phase dense simplex. Dantzig pricing, switching to Bland's rule after a
/// run of degenerate pivots. Deterministic for identical input.
///
/// Throws Error{DimensionMismatch} on inconsistent shapes and
/// Error{NumericalBreakdown} when the iteration budget is exhausted.
LpSolution solve_lp(const LinearProgram& lp);

/// Largest violation of the program's constraints at x, each row scaled by
/// 1 / (1 + ||row||_inf).
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// Euclidean projection of v onto {w : ||w||_1 <= radius}.
Vector project_l2_onto_l1_ball(std::span<const double> v, double radius);

/// Simplex lattice {c / n : c integer, c >= 0, sum c = n} in dimension D.
/// Points are stored as integer counts; the probability vector is counts / n.
using LatticePoint = std::vector<std::uint32_t>;

/// Lattice resolution n = ceil(D / eps) used for an eps-covering.
std::uint32_t lattice_resolution(std::size_t dimension, double eps);

/// Number of lattice points C(n + D - 1, D - 1), saturating at +inf.
double lattice_size(std::size_t dimension, std::uint32_t resolution);

/// Lattice point l1-nearest to the distribution p (largest-remainder rounding,
/// ties to the lower coordinate index).
LatticePoint nearest_lattice_point(std::span<const double> p, std::uint32_t resolution);

Vector lattice_to_distribution(const LatticePoint& point);

/// Every lattice point of resolution ceil(D / eps), in ascending lexicographic
/// order of the probability vectors. Throws Error{GridTooLarge} above `cap`.
std::vector<Vector> simplex_grid(std::size_t dimension, double eps,
                                 std::size_t cap = tol::kDefaultGridCap);

/// Same lattice as integer counts.
std::vector<LatticePoint> simplex_lattice(std::size_t dimension, std::uint32_t resolution,
                                          std::size_t cap = tol::kDefaultGridCap);

double l1_distance(std::span<const double> a, std::span<const double> b);
double l1_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace calband
