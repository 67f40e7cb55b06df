#include "drmo/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drmo/error.hpp"
#include "drmo/random.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

std::string node_text(std::size_t t, Index row, Index xi) {
    return "stage " + std::to_string(t) + ", previous action " + std::to_string(row) + ", outcome " +
           std::to_string(xi);
}

std::size_t row_count(const MultistageProblem& prob, std::size_t t) { return t == 0 ? 1 : prob.actions[t - 1]; }

// Action taken before node h of stage t (0 at the first stage).
Index previous_action(const MultistageProblem& prob, const Policy& pi, std::size_t t, Index h) {
    return t == 0 ? 0 : pi.actions[t - 1][h / prob.outcomes[t]];
}

// Minimum of cost + cost-to-go over the allowed actions, smallest index on ties.
std::pair<double, Index> best_action(const MultistageProblem& prob, const std::vector<std::vector<double>>& ctg,
                                     std::size_t t, Index row, Index xi) {
    std::vector<Index> options = prob.allowed[t][row][xi];
    std::sort(options.begin(), options.end());
    double best = kInf;
    Index arg = options.front();
    for (Index x : options) {
        const double v = prob.cost[t][x][xi] + ctg[t][x];
        if (v < best - 1e-12) {
            best = v;
            arg = x;
        }
    }
    return {best, arg};
}

Policy extract(const MultistageProblem& prob, const ValueFunctions& v) {
    Policy pi;
    pi.actions.resize(prob.stage_count());
    for (std::size_t t = 0; t < prob.stage_count(); ++t) {
        pi.actions[t].resize(prob.node_count(t));
        for (Index h = 0; h < prob.node_count(t); ++h)
            pi.actions[t][h] = v.decision[t][previous_action(prob, pi, t, h)][h % prob.outcomes[t]];
    }
    return pi;
}

}  // namespace

std::size_t MultistageProblem::node_count(std::size_t stage) const {
    std::size_t n = 1;
    for (std::size_t t = 0; t <= stage; ++t) n *= outcomes[t];
    return n;
}

void MultistageProblem::validate() const {
    const std::size_t T = outcomes.size();
    require(T >= 1, "a multistage problem needs at least one stage");
    require(actions.size() == T && cost.size() == T && allowed.size() == T && sets.size() == T,
            "outcomes, actions, cost, allowed and sets need one entry per stage");
    require(outcomes[0] == 1, "the first stage is deterministic and has exactly one outcome");
    for (std::size_t t = 0; t < T; ++t) {
        require(outcomes[t] >= 1 && actions[t] >= 1, "every stage needs outcomes and actions");
        require(cost[t].size() == actions[t], "cost table of stage " + std::to_string(t) + " needs one row per action");
        for (const auto& row : cost[t]) {
            require(row.size() == outcomes[t], "cost table of stage " + std::to_string(t) + " needs one column per outcome");
            for (double c : row) require(std::isfinite(c), "costs must be finite");
        }
        const std::size_t rows = t == 0 ? 1 : actions[t - 1];
        require(allowed[t].size() == rows, "allowed table of stage " + std::to_string(t) + " has the wrong row count");
        for (Index r = 0; r < rows; ++r) {
            require(allowed[t][r].size() == outcomes[t],
                    "allowed table of stage " + std::to_string(t) + " needs one list per outcome");
            for (Index xi = 0; xi < outcomes[t]; ++xi) {
                const auto& list = allowed[t][r][xi];
                require(!list.empty(), "no feasible action at " + node_text(t, r, xi));
                for (Index x : list) require(x < actions[t], "unknown action in the allowed list at " + node_text(t, r, xi));
            }
        }
        if (t == 0) {
            require(!sets[0].has_value(), "the first stage carries no ambiguity set");
        } else {
            require(sets[t].has_value(), "stage " + std::to_string(t) + " has no ambiguity set");
            require(sets[t]->space_size() == outcomes[t],
                    "ambiguity set of stage " + std::to_string(t) + " lives on a different space");
        }
    }
}

RectangularSpec MultistageProblem::rectangular() const {
    RectangularSpec spec;
    for (std::size_t t = 1; t < sets.size(); ++t) spec.stages.push_back(*sets[t]);
    return spec;
}

// ---------------------------------------------------------------------------
// Backward induction

DpSolution solve_dp(const MultistageProblem& prob) {
    prob.validate();
    const std::size_t T = prob.stage_count();
    ValueFunctions v;
    v.stage_value.resize(T);
    v.cost_to_go.resize(T);
    v.decision.resize(T);
    for (std::size_t t = T; t-- > 0;) {
        v.cost_to_go[t].assign(prob.actions[t], 0.0);
        if (t + 1 < T)
            for (Index x = 0; x < prob.actions[t]; ++x)
                v.cost_to_go[t][x] = robust_expectation(*prob.sets[t + 1], RandomVariable(v.stage_value[t + 1][x])).value;
        const std::size_t rows = row_count(prob, t);
        v.stage_value[t].assign(rows, std::vector<double>(prob.outcomes[t]));
        v.decision[t].assign(rows, std::vector<Index>(prob.outcomes[t]));
        for (Index r = 0; r < rows; ++r)
            for (Index xi = 0; xi < prob.outcomes[t]; ++xi) {
                const auto [value, arg] = best_action(prob, v.cost_to_go, t, r, xi);
                v.stage_value[t][r][xi] = value;
                v.decision[t][r][xi] = arg;
            }
    }
    Policy pi = extract(prob, v);
    const double value = v.stage_value[0][0][0];
    return {value, std::move(pi), std::move(v)};
}

double bellman_residual(const MultistageProblem& prob, const ValueFunctions& v) {
    const std::size_t T = prob.stage_count();
    double worst = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        for (Index x = 0; x < prob.actions[t]; ++x) {
            const double ctg =
                t + 1 < T ? robust_expectation(*prob.sets[t + 1], RandomVariable(v.stage_value[t + 1][x])).value : 0.0;
            worst = std::max(worst, std::abs(ctg - v.cost_to_go[t][x]));
        }
        for (Index r = 0; r < row_count(prob, t); ++r)
            for (Index xi = 0; xi < prob.outcomes[t]; ++xi)
                worst = std::max(worst, std::abs(best_action(prob, v.cost_to_go, t, r, xi).first - v.stage_value[t][r][xi]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Policies

void check_policy(const MultistageProblem& prob, const Policy& pi) {
    require(pi.actions.size() == prob.stage_count(), "policy needs one action table per stage");
    for (std::size_t t = 0; t < prob.stage_count(); ++t) {
        require(pi.actions[t].size() == prob.node_count(t),
                "policy needs one action per history at stage " + std::to_string(t));
        for (Index h = 0; h < prob.node_count(t); ++h) {
            const Index row = previous_action(prob, pi, t, h);
            const Index xi = h % prob.outcomes[t];
            const auto& list = prob.allowed[t][row][xi];
            require(std::find(list.begin(), list.end(), pi.actions[t][h]) != list.end(),
                    "policy action " + std::to_string(pi.actions[t][h]) + " is not allowed at " + node_text(t, row, xi));
        }
    }
}

RandomVariable policy_cost(const MultistageProblem& prob, const Policy& pi) {
    const std::size_t T = prob.stage_count();
    const std::size_t n = prob.scenario_count();
    std::vector<double> z(n, 0.0);
    for (Index s = 0; s < n; ++s) {
        std::size_t below = n;
        for (std::size_t t = 0; t < T; ++t) {
            below /= prob.outcomes[t];
            const Index h = s / below;
            z[s] += prob.cost[t][pi.actions[t][h]][h % prob.outcomes[t]];
        }
    }
    return RandomVariable(std::move(z));
}

double nested_policy_value(const MultistageProblem& prob, const Policy& pi) {
    prob.validate();
    check_policy(prob, pi);
    const auto z = policy_cost(prob, pi);
    if (prob.stage_count() == 1) return z[0];
    return rectangular_nested(prob.rectangular(), z).value;
}

double static_policy_value(const MultistageProblem& prob, const Policy& pi) {
    prob.validate();
    check_policy(prob, pi);
    const auto z = policy_cost(prob, pi);
    if (prob.stage_count() == 1) return z[0];
    const auto spec = prob.rectangular();
    if (!stage_vertices(spec)) throw PreconditionError("the static value needs finitely generated stage sets");
    return static_rectangular(spec, z).value;
}

double policy_count(const MultistageProblem& prob) {
    prob.validate();
    const std::size_t T = prob.stage_count();
    // below[x]: number of ways to complete the policy under a node whose
    // parent took action x at stage t.
    std::vector<double> below(prob.actions[T - 1], 1.0);
    for (std::size_t t = T; t-- > 0;) {
        const std::size_t rows = row_count(prob, t);
        std::vector<double> above(rows, 1.0);
        for (Index r = 0; r < rows; ++r)
            for (Index xi = 0; xi < prob.outcomes[t]; ++xi) {
                double ways = 0.0;
                for (Index x : prob.allowed[t][r][xi]) ways += below[x];
                above[r] *= ways;
            }
        below = std::move(above);
    }
    return below[0];
}

void for_each_policy(const MultistageProblem& prob, const std::function<void(const Policy&)>& visit,
                     std::size_t cap) {
    const double count = policy_count(prob);
    if (count > double(cap))
        throw CapExceededError("policy enumeration would visit " + std::to_string(count) + " policies, cap is " +
                               std::to_string(cap));
    const std::size_t T = prob.stage_count();
    std::vector<std::pair<std::size_t, Index>> nodes;
    for (std::size_t t = 0; t < T; ++t)
        for (Index h = 0; h < prob.node_count(t); ++h) nodes.emplace_back(t, h);
    Policy pi;
    pi.actions.resize(T);
    for (std::size_t t = 0; t < T; ++t) pi.actions[t].assign(prob.node_count(t), 0);

    std::function<void(std::size_t)> fill = [&](std::size_t k) {
        if (k == nodes.size()) {
            visit(pi);
            return;
        }
        const auto [t, h] = nodes[k];
        for (Index x : prob.allowed[t][previous_action(prob, pi, t, h)][h % prob.outcomes[t]]) {
            pi.actions[t][h] = x;
            fill(k + 1);
        }
    };
    fill(0);
}

PolicyComparison compare_min_static_vs_min_nested(const MultistageProblem& prob, std::size_t cap) {
    PolicyComparison out;
    out.dp_value = solve_dp(prob).value;
    std::vector<Policy> policies;
    std::vector<double> stat, nest;
    for_each_policy(
        prob,
        [&](const Policy& pi) {
            policies.push_back(pi);
            stat.push_back(static_policy_value(prob, pi));
            nest.push_back(nested_policy_value(prob, pi));
        },
        cap);
    out.policies = policies.size();
    const auto is = std::min_element(stat.begin(), stat.end()) - stat.begin();
    const auto in = std::min_element(nest.begin(), nest.end()) - nest.begin();
    out.min_static = stat[is];
    out.min_nested = nest[in];
    out.static_argmin = policies[is];
    out.nested_argmin = policies[in];
    out.argmins_differ = true;
    for (std::size_t k = 0; k < policies.size(); ++k)
        if (stat[k] <= out.min_static + tol::kEqual && nest[k] <= out.min_nested + tol::kEqual)
            out.argmins_differ = false;
    out.inequality_holds = out.min_static <= out.min_nested + tol::kEqual;
    out.dp_matches = std::abs(out.dp_value - out.min_nested) <= tol::kEqual;
    return out;
}

NecessityReport verify_optimality_necessity(const MultistageProblem& prob, std::size_t cap) {
    NecessityReport rep;
    const auto sol = solve_dp(prob);
    const std::size_t T = prob.stage_count();

    auto violations_of = [&](const Policy& pi, const std::vector<std::vector<bool>>& charged) {
        std::size_t bad = 0;
        for (std::size_t t = 0; t < T; ++t)
            for (Index h = 0; h < prob.node_count(t); ++h) {
                bool reachable = true;
                Index g = h;
                for (std::size_t s = t + 1; s-- > 0;) {
                    reachable = reachable && charged[s][g % prob.outcomes[s]];
                    g /= prob.outcomes[s];
                }
                if (!reachable) continue;
                const Index row = previous_action(prob, pi, t, h);
                const Index xi = h % prob.outcomes[t];
                const Index x = pi.actions[t][h];
                const double best = best_action(prob, sol.values.cost_to_go, t, row, xi).first;
                if (prob.cost[t][x][xi] + sol.values.cost_to_go[t][x] > best + tol::kEqual) ++bad;
            }
        return bad;
    };

    std::vector<std::vector<bool>> charged(T);
    charged[0] = {true};
    for (std::size_t t = 1; t < T; ++t) {
        const auto mu = reference_measure(*prob.sets[t]).mu;
        for (Index i = 0; i < prob.outcomes[t]; ++i) charged[t].push_back(mu[i] > tol::kEqual);
    }

    rep.sufficiency_holds = violations_of(sol.policy, charged) == 0 &&
                            std::abs(nested_policy_value(prob, sol.policy) - sol.value) <= tol::kEqual;

    for (std::size_t t = 1; t < T; ++t) {
        const auto sm = is_strictly_monotone(*prob.sets[t], reference_measure(*prob.sets[t]).normalized);
        if (!sm.strict) {
            rep.skipped = true;
            rep.note = "stage " + std::to_string(t) + " set is not strictly monotone: outcome " +
                       std::to_string(sm.outcome) + " gets zero mass under a member";
            return rep;
        }
    }

    for_each_policy(
        prob,
        [&](const Policy& pi) {
            ++rep.policies;
            if (nested_policy_value(prob, pi) > sol.value + tol::kEqual) return;
            ++rep.optimal_policies;
            rep.violations += violations_of(pi, charged);
        },
        cap);
    return rep;
}

WeakDuality weak_duality_check(const MultistageProblem& prob, std::size_t cap) {
    prob.validate();
    double min_max = kInf;
    for_each_policy(prob, [&](const Policy& pi) { min_max = std::min(min_max, static_policy_value(prob, pi)); }, cap);
    if (prob.stage_count() == 1) return {min_max, min_max, true};

    const auto verts = *stage_vertices(prob.rectangular());
    double max_min = kNegInf;
    std::vector<Index> pick(verts.size(), 0);
    for (;;) {
        // Against a fixed product measure the inner minimum is a risk-neutral DP.
        MultistageProblem fixed = prob;
        for (std::size_t k = 0; k < verts.size(); ++k) fixed.sets[k + 1] = AmbiguitySet::singleton(verts[k][pick[k]]);
        max_min = std::max(max_min, solve_dp(fixed).value);
        std::size_t k = verts.size();
        while (k > 0 && ++pick[k - 1] == verts[k - 1].size()) pick[--k] = 0;
        if (k == 0) break;
    }
    return {max_min, min_max, max_min <= min_max + tol::kEqual};
}

MultistageProblem witness_problem() {
    MultistageProblem p;
    p.outcomes = {1, 2, 2};
    p.actions = {1, 3, 3};
    p.cost = {{{0.0}}, {{0.05, 0.05}, {0.05, 0.05}, {0.0, 0.0}}, {{0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}};
    p.allowed = {{{{0}}},
                 {{{0, 1, 2}, {0, 1, 2}}},
                 {{{0}, {0}}, {{1}, {1}}, {{2}, {2}}}};
    p.sets = {std::nullopt, AmbiguitySet::singleton(DiscreteMeasure::uniform(2)),
              AmbiguitySet::finite_family({DiscreteMeasure({1, 0}), DiscreteMeasure({0, 1})})};
    return p;
}

namespace gen {

namespace {

AmbiguitySet strict_set(Rng& rng, std::size_t n) {
    if (rng.coin()) {
        const auto p = probability(rng, n, 0.0);
        double low = 1.0;
        for (Index i = 0; i < n; ++i) low = std::min(low, p[i]);
        return AmbiguitySet::avar(rng.uniform(0.0, 0.9 * low), p);
    }
    std::vector<DiscreteMeasure> members;
    const std::size_t k = rng.between(1, 3);
    for (std::size_t j = 0; j < k; ++j) members.push_back(probability(rng, n, 0.0));
    return AmbiguitySet::finite_family(std::move(members));
}

}  // namespace

MultistageProblem multistage_problem(Rng& rng, const ProblemShape& shape, std::size_t cap) {
    const std::vector<AmbiguityKind> kinds{AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment};
    for (;;) {
        MultistageProblem p;
        const std::size_t T = rng.between(std::min<std::size_t>(2, shape.max_stages), shape.max_stages);
        for (std::size_t t = 0; t < T; ++t) {
            p.outcomes.push_back(t == 0 ? 1 : rng.between(2, shape.max_outcomes));
            p.actions.push_back(rng.between(1, shape.max_actions));
        }
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<std::vector<double>> c(p.actions[t], std::vector<double>(p.outcomes[t]));
            for (auto& row : c)
                for (auto& v : row) v = rng.uniform(0.0, 5.0);
            p.cost.push_back(std::move(c));
            const std::size_t rows = t == 0 ? 1 : p.actions[t - 1];
            std::vector<std::vector<std::vector<Index>>> allow(rows, std::vector<std::vector<Index>>(p.outcomes[t]));
            for (auto& row : allow)
                for (auto& list : row) {
                    for (Index x = 0; x < p.actions[t]; ++x)
                        if (rng.coin(0.6)) list.push_back(x);
                    if (list.empty()) list.push_back(rng.index(p.actions[t]));
                }
            p.allowed.push_back(std::move(allow));
            if (t == 0)
                p.sets.emplace_back(std::nullopt);
            else if (shape.strict)
                p.sets.emplace_back(strict_set(rng, p.outcomes[t]));
            else
                p.sets.emplace_back(ambiguity_set(rng, kinds[rng.index(kinds.size())], p.outcomes[t]));
        }
        if (policy_count(p) <= double(cap)) return p;
    }
}

}  // namespace gen

}  // namespace drmo
