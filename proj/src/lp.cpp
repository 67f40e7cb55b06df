#include "drmo/lp.hpp"

#include <algorithm>
#include <cmath>

#include "drmo/error.hpp"
#include "drmo/tolerance.hpp"

namespace drmo::lp {

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

LinearProgram::LinearProgram(std::size_t variables, Direction direction)
    : direction_(direction), objective_(variables, 0.0), lower_(variables, 0.0), upper_(variables, kInf) {}

void LinearProgram::set_objective(std::vector<double> c) {
    if (c.size() != objective_.size()) throw ValidationError("objective length does not match variable count");
    objective_ = std::move(c);
}

void LinearProgram::set_bounds(Index j, double lower, double upper) {
    if (j >= objective_.size()) throw ValidationError("bound index out of range");
    lower_[j] = lower;
    upper_[j] = upper;
}

std::size_t LinearProgram::add_constraint(std::vector<double> coefficients, Sense sense, double rhs) {
    if (coefficients.size() != objective_.size())
        throw ValidationError("constraint length does not match variable count");
    constraints_.push_back({std::move(coefficients), sense, rhs});
    return constraints_.size() - 1;
}

void LinearProgram::validate() const {
    const std::size_t n = objective_.size();
    if (lower_.size() != n || upper_.size() != n) throw ValidationError("bound vectors have the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j] || lower_[j] == kInf ||
            upper_[j] == kNegInf)
            throw ValidationError("variable " + std::to_string(j) + " has inconsistent bounds");
        if (!std::isfinite(objective_[j])) throw ValidationError("objective coefficients must be finite");
    }
    for (const auto& row : constraints_) {
        if (row.coefficients.size() != n) throw ValidationError("constraint length does not match variable count");
        if (!std::isfinite(row.rhs)) throw ValidationError("right-hand sides must be finite");
        for (double a : row.coefficients)
            if (!std::isfinite(a)) throw ValidationError("constraint coefficients must be finite");
    }
}

namespace {

constexpr double kOptimality = 1e-9;
constexpr double kRatioTie = 1e-12;
constexpr std::size_t kMaxIterations = 200000;

// One column of the standard form: original = offset + sign * column.
struct ColumnOrigin {
    Index original;
    double sign;
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), cost_(cols + 1, 0.0), basis_(rows, 0) {}

    double& at(std::size_t i, std::size_t j) { return a_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols_); }
    double rhs(std::size_t i) const { return at(i, cols_); }
    std::vector<double>& cost() { return cost_; }
    std::vector<std::size_t>& basis() { return basis_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        const double f = cost_[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= f * at(r, j);
            cost_[c] = 0.0;
        }
        basis_[r] = c;
    }

    // Reduced costs for column costs c (size cols): r_j = c_j - c_B' B^-1 a_j.
    void price(const std::vector<double>& c) {
        for (std::size_t j = 0; j < cols_; ++j) {
            double r = c[j];
            for (std::size_t i = 0; i < rows_; ++i) r -= c[basis_[i]] * at(i, j);
            cost_[j] = r;
        }
        double z = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) z += c[basis_[i]] * rhs(i);
        cost_[cols_] = -z;
    }

    // Bland's rule simplex on the current cost row. Columns at index >= `allowed`
    // never enter. Returns false when unbounded.
    bool run(std::size_t allowed, std::size_t& iterations) {
        for (;;) {
            if (++iterations > kMaxIterations)
                throw InternalError("simplex iteration guard exceeded; Bland's rule should prevent cycling");
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < allowed; ++j)
                if (cost_[j] < -kOptimality) {
                    enter = j;
                    break;
                }
            if (enter == cols_) return true;

            std::size_t leave = rows_;
            double best = kInf;
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = at(i, enter);
                if (a <= tol::kPivot) continue;
                const double ratio = std::max(rhs(i), 0.0) / a;
                if (leave == rows_ || ratio < best - kRatioTie) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + kRatioTie && basis_[i] < basis_[leave]) {
                    leave = i;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const LinearProgram& program) {
    program.validate();
    const std::size_t n = program.variable_count();
    const auto& lower = program.lower();
    const auto& upper = program.upper();
    const bool maximize = program.direction() == Direction::Maximize;

    // Minimization costs on the original variables.
    std::vector<double> c(program.objective());
    if (maximize)
        for (double& x : c) x = -x;

    // Variable substitution into nonnegative columns.
    std::vector<double> offset(n, 0.0);
    std::vector<ColumnOrigin> columns;
    struct BoundRow {
        std::size_t column;
        double width;
    };
    std::vector<BoundRow> bound_rows;
    for (Index j = 0; j < n; ++j) {
        if (std::isfinite(lower[j])) {
            offset[j] = lower[j];
            columns.push_back({j, 1.0});
            if (std::isfinite(upper[j])) bound_rows.push_back({columns.size() - 1, upper[j] - lower[j]});
        } else if (std::isfinite(upper[j])) {
            offset[j] = upper[j];
            columns.push_back({j, -1.0});
        } else {
            columns.push_back({j, 1.0});
            columns.push_back({j, -1.0});
        }
    }

    const auto& cons = program.constraints();
    const std::size_t m_orig = cons.size();
    const std::size_t m = m_orig + bound_rows.size();
    const std::size_t n_struct = columns.size();

    // Rows of the standard form before slack/artificial augmentation.
    std::vector<std::vector<double>> rows(m, std::vector<double>(n_struct, 0.0));
    std::vector<double> b(m, 0.0);
    std::vector<Sense> senses(m, Sense::LessEqual);
    for (std::size_t i = 0; i < m_orig; ++i) {
        double shift = 0.0;
        for (std::size_t k = 0; k < n_struct; ++k)
            rows[i][k] = cons[i].coefficients[columns[k].original] * columns[k].sign;
        for (Index j = 0; j < n; ++j) shift += cons[i].coefficients[j] * offset[j];
        b[i] = cons[i].rhs - shift;
        senses[i] = cons[i].sense;
    }
    for (std::size_t r = 0; r < bound_rows.size(); ++r) {
        rows[m_orig + r][bound_rows[r].column] = 1.0;
        b[m_orig + r] = bound_rows[r].width;
    }

    std::vector<bool> flipped(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            flipped[i] = true;
            b[i] = -b[i];
            for (double& a : rows[i]) a = -a;
            if (senses[i] == Sense::LessEqual)
                senses[i] = Sense::GreaterEqual;
            else if (senses[i] == Sense::GreaterEqual)
                senses[i] = Sense::LessEqual;
        }
    }

    // Column layout: structural | slack/surplus | artificial.
    std::size_t n_slack = 0, n_art = 0;
    for (Sense s : senses) {
        if (s != Sense::Equal) ++n_slack;
        if (s != Sense::LessEqual) ++n_art;
    }
    const std::size_t first_slack = n_struct;
    const std::size_t first_art = n_struct + n_slack;
    const std::size_t total = first_art + n_art;

    Tableau t(m, total);
    std::vector<std::size_t> identity(m);
    {
        std::size_t s = first_slack, a = first_art;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < n_struct; ++k) t.at(i, k) = rows[i][k];
            t.rhs(i) = b[i];
            switch (senses[i]) {
                case Sense::LessEqual:
                    t.at(i, s) = 1.0;
                    identity[i] = s++;
                    break;
                case Sense::GreaterEqual:
                    t.at(i, s++) = -1.0;
                    t.at(i, a) = 1.0;
                    identity[i] = a++;
                    break;
                case Sense::Equal:
                    t.at(i, a) = 1.0;
                    identity[i] = a++;
                    break;
            }
            t.basis()[i] = identity[i];
        }
    }

    Solution sol;
    std::size_t iterations = 0;

    // Phase 1.
    if (n_art > 0) {
        std::vector<double> phase1(total, 0.0);
        for (std::size_t j = first_art; j < total; ++j) phase1[j] = 1.0;
        t.price(phase1);
        t.run(total, iterations);
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (t.basis()[i] >= first_art) infeasibility += t.rhs(i);
        if (infeasibility > tol::kFeasibility) {
            sol.status = Status::Infeasible;
            sol.iterations = iterations;
            return sol;
        }
        // Drive zero-level artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis()[i] < first_art) continue;
            for (std::size_t j = 0; j < first_art; ++j)
                if (std::abs(t.at(i, j)) > tol::kPivot) {
                    t.rhs(i) = 0.0;
                    t.pivot(i, j);
                    break;
                }
        }
    }

    // Phase 2.
    std::vector<double> phase2(total, 0.0);
    for (std::size_t k = 0; k < n_struct; ++k) phase2[k] = c[columns[k].original] * columns[k].sign;
    t.price(phase2);
    if (!t.run(first_art, iterations)) {
        sol.status = Status::Unbounded;
        sol.iterations = iterations;
        return sol;
    }

    std::vector<double> col_value(total, 0.0);
    for (std::size_t i = 0; i < m; ++i) col_value[t.basis()[i]] = std::max(t.rhs(i), 0.0);

    sol.status = Status::Optimal;
    sol.iterations = iterations;
    sol.primal = offset;
    for (std::size_t k = 0; k < n_struct; ++k) sol.primal[columns[k].original] += columns[k].sign * col_value[k];
    // Snap onto bounds to absorb round-off.
    for (Index j = 0; j < n; ++j) sol.primal[j] = std::clamp(sol.primal[j], lower[j], upper[j]);

    sol.value = 0.0;
    for (Index j = 0; j < n; ++j) sol.value += program.objective()[j] * sol.primal[j];

    // Duals of the minimization form, read off the identity columns.
    std::vector<double> y(m_orig);
    for (std::size_t i = 0; i < m_orig; ++i) {
        const double ys = -t.cost()[identity[i]];
        y[i] = flipped[i] ? -ys : ys;
    }
    std::vector<double> d(c);
    for (std::size_t i = 0; i < m_orig; ++i)
        for (Index j = 0; j < n; ++j) d[j] -= cons[i].coefficients[j] * y[i];
    double dual_min = 0.0;
    for (std::size_t i = 0; i < m_orig; ++i) dual_min += cons[i].rhs * y[i];
    for (Index j = 0; j < n; ++j) {
        if (d[j] > kOptimality)
            dual_min += d[j] * (std::isfinite(lower[j]) ? lower[j] : sol.primal[j]);
        else if (d[j] < -kOptimality)
            dual_min += d[j] * (std::isfinite(upper[j]) ? upper[j] : sol.primal[j]);
    }

    if (maximize) {
        for (double& v : y) v = -v;
        for (double& v : d) v = -v;
        sol.dual_value = -dual_min;
    } else {
        sol.dual_value = dual_min;
    }
    sol.dual = std::move(y);
    sol.reduced_costs = std::move(d);
    return sol;
}

Certificate certify(const LinearProgram& program, const Solution& s) {
    Certificate cert;
    if (s.status != Status::Optimal) return cert;
    const bool maximize = program.direction() == Direction::Maximize;
    const auto& cons = program.constraints();
    const std::size_t n = program.variable_count();

    for (std::size_t i = 0; i < cons.size(); ++i) {
        double ax = 0.0;
        for (Index j = 0; j < n; ++j) ax += cons[i].coefficients[j] * s.primal[j];
        const double slack = ax - cons[i].rhs;
        double viol = 0.0;
        switch (cons[i].sense) {
            case Sense::LessEqual: viol = std::max(slack, 0.0); break;
            case Sense::GreaterEqual: viol = std::max(-slack, 0.0); break;
            case Sense::Equal: viol = std::abs(slack); break;
        }
        cert.primal_infeasibility = std::max(cert.primal_infeasibility, viol);
        cert.complementary_slackness = std::max(cert.complementary_slackness, std::abs(s.dual[i] * slack));

        // Minimization form: y >= 0 on >= rows, y <= 0 on <= rows.
        const double y = maximize ? -s.dual[i] : s.dual[i];
        if (cons[i].sense == Sense::GreaterEqual)
            cert.dual_infeasibility = std::max(cert.dual_infeasibility, -y);
        else if (cons[i].sense == Sense::LessEqual)
            cert.dual_infeasibility = std::max(cert.dual_infeasibility, y);
    }
    for (Index j = 0; j < n; ++j) {
        const double lo = program.lower()[j], hi = program.upper()[j], x = s.primal[j];
        cert.primal_infeasibility = std::max({cert.primal_infeasibility, lo - x, x - hi});
        const double d = maximize ? -s.reduced_costs[j] : s.reduced_costs[j];
        if (d > 0.0) {
            if (!std::isfinite(lo)) cert.dual_infeasibility = std::max(cert.dual_infeasibility, d);
            else cert.complementary_slackness = std::max(cert.complementary_slackness, std::abs(d * (x - lo)));
        } else if (d < 0.0) {
            if (!std::isfinite(hi)) cert.dual_infeasibility = std::max(cert.dual_infeasibility, -d);
            else cert.complementary_slackness = std::max(cert.complementary_slackness, std::abs(d * (x - hi)));
        }
    }
    cert.duality_gap = std::abs(s.value - s.dual_value);
    return cert;
}

double AffineForm::operator()(const std::vector<double>& x) const {
    double v = constant;
    for (std::size_t j = 0; j < coefficients.size(); ++j) v += coefficients[j] * x[j];
    return v;
}

FractionalSolution solve_linear_fractional(const AffineForm& numerator, const AffineForm& denominator,
                                           const LinearProgram& feasible) {
    feasible.validate();
    const std::size_t n = feasible.variable_count();
    if (numerator.coefficients.size() != n || denominator.coefficients.size() != n)
        throw ValidationError("affine forms must match the variable count");

    // Charnes-Cooper: y = t x, t = 1 / denominator(x) > 0.
    const std::size_t t_var = n;
    LinearProgram cc(n + 1, Direction::Maximize);
    std::vector<double> obj(numerator.coefficients);
    obj.push_back(numerator.constant);
    cc.set_objective(std::move(obj));

    for (Index j = 0; j < n; ++j) {
        const double lo = feasible.lower()[j], hi = feasible.upper()[j];
        if (lo == 0.0) {
            cc.set_bounds(j, 0.0, kInf);
        } else {
            cc.set_bounds(j, kNegInf, kInf);
            if (std::isfinite(lo)) {
                std::vector<double> row(n + 1, 0.0);
                row[j] = 1.0;
                row[t_var] = -lo;
                cc.add_constraint(std::move(row), Sense::GreaterEqual, 0.0);
            }
        }
        if (std::isfinite(hi)) {
            std::vector<double> row(n + 1, 0.0);
            row[j] = 1.0;
            row[t_var] = -hi;
            cc.add_constraint(std::move(row), Sense::LessEqual, 0.0);
        }
    }
    for (const auto& con : feasible.constraints()) {
        std::vector<double> row(con.coefficients);
        row.push_back(-con.rhs);
        cc.add_constraint(std::move(row), con.sense, 0.0);
    }
    {
        std::vector<double> row(denominator.coefficients);
        row.push_back(denominator.constant);
        cc.add_constraint(std::move(row), Sense::Equal, 1.0);
    }
    cc.set_bounds(t_var, 0.0, kInf);

    const Solution s = solve(cc);
    FractionalSolution out;
    if (s.status == Status::Infeasible) return out;
    const double t = s.status == Status::Optimal ? s.primal[t_var] : 0.0;
    if (s.status == Status::Unbounded || t <= tol::kPivot) {
        out.status = FractionalStatus::Unbounded;
        out.value = kInf;
        return out;
    }
    out.status = FractionalStatus::Optimal;
    out.value = s.value;
    out.argmax.resize(n);
    for (Index j = 0; j < n; ++j) out.argmax[j] = s.primal[j] / t;
    return out;
}

}  // namespace drmo::lp
