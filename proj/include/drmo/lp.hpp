#pragma once

// Small dense linear programming: two-phase primal simplex on a full tableau
// with Bland's anti-cycling rule, plus the Charnes-Cooper reduction of
// linear-fractional programs.

#include <cstddef>
#include <string>
#include <vector>

#include "drmo/measure.hpp"

namespace drmo::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Direction { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status s);

struct Constraint {
    std::vector<double> coefficients;
    Sense sense;
    double rhs;
};

/// optimize c'x  s.t.  a_i'x (sense_i) b_i,  lower <= x <= upper.
/// Bounds default to [0, +inf); -inf/+inf are allowed (free variables).
class LinearProgram {
public:
    explicit LinearProgram(std::size_t variables, Direction direction = Direction::Minimize);

    std::size_t variable_count() const noexcept { return objective_.size(); }
    std::size_t constraint_count() const noexcept { return constraints_.size(); }
    Direction direction() const noexcept { return direction_; }

    void set_direction(Direction d) { direction_ = d; }
    void set_objective(std::vector<double> c);
    void set_bounds(Index j, double lower, double upper);
    /// Returns the constraint index.
    std::size_t add_constraint(std::vector<double> coefficients, Sense sense, double rhs);

    const std::vector<double>& objective() const noexcept { return objective_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }

    /// Throws ValidationError on inconsistent dimensions or crossed bounds.
    void validate() const;

private:
    Direction direction_;
    std::vector<double> objective_;
    std::vector<Constraint> constraints_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Dual multipliers follow the shadow-price convention: dual[i] is the rate of
/// change of the optimal value in rhs[i]. `dual_value` is the objective of the
/// bounded-variable dual, b'y plus the bound terms selected by the signs of
/// the reduced costs; it certifies optimality independently of the primal.
struct Solution {
    Status status = Status::Infeasible;
    double value = 0.0;
    std::vector<double> primal;
    std::vector<double> dual;
    std::vector<double> reduced_costs;
    double dual_value = 0.0;
    std::size_t iterations = 0;
};

Solution solve(const LinearProgram& program);

/// Residuals of an optimal solution: max constraint/bound violation, max
/// dual-sign violation and |primal value - dual value|.
struct Certificate {
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double duality_gap = 0.0;
    double complementary_slackness = 0.0;
};

Certificate certify(const LinearProgram& program, const Solution& solution);

struct AffineForm {
    std::vector<double> coefficients;
    double constant = 0.0;

    double operator()(const std::vector<double>& x) const;
};

enum class FractionalStatus { Optimal, Unreachable, Unbounded };

struct FractionalSolution {
    FractionalStatus status = FractionalStatus::Unreachable;
    double value = kNegInf;
    std::vector<double> argmax;
};

/// sup numerator(x) / denominator(x) over the polytope described by the
/// constraints and bounds of `feasible` (its objective is ignored), restricted
/// to points where the denominator is positive. Unreachable means the
/// denominator is nowhere positive on the polytope (or the polytope is empty).
FractionalSolution solve_linear_fractional(const AffineForm& numerator, const AffineForm& denominator,
                                          const LinearProgram& feasible);

}  // namespace drmo::lp
