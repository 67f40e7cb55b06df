#pragma once

// Finite multistage problems under stagewise (rectangular) ambiguity: backward
// induction, policy evaluation and exhaustive policy enumeration.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "drmo/ambiguity.hpp"
#include "drmo/composite.hpp"
#include "drmo/rng.hpp"

namespace drmo {

/// Stages t = 0..T-1. Stage 0 has a single outcome (the first stage is
/// deterministic). At stage t the outcome xi_t is revealed, then an action
/// x_t is taken among allowed[t][x_{t-1}][xi_t] at cost cost[t][x_t][xi_t].
/// Stage 0 reads its allowed list from allowed[0][0][0].
struct MultistageProblem {
    std::vector<std::size_t> outcomes;
    std::vector<std::size_t> actions;
    std::vector<std::vector<std::vector<double>>> cost;
    std::vector<std::vector<std::vector<std::vector<Index>>>> allowed;
    /// Marginal set of stage t over its outcomes; empty at t = 0.
    std::vector<std::optional<AmbiguitySet>> sets;

    std::size_t stage_count() const { return outcomes.size(); }
    /// Number of histories (xi_0, ..., xi_t).
    std::size_t node_count(std::size_t stage) const;
    std::size_t scenario_count() const { return node_count(stage_count() - 1); }
    /// Throws ValidationError on malformed tables or an empty allowed list.
    void validate() const;
    /// The stochastic stages 1..T-1 as a rectangular spec (empty when T = 1).
    RectangularSpec rectangular() const;
};

/// actions[t][h]: action at history h of stage t (histories numbered
/// lexicographically, parent of h at stage t is h / outcomes[t]).
struct Policy {
    std::vector<std::vector<Index>> actions;

    friend bool operator==(const Policy&, const Policy&) = default;
};

struct ValueFunctions {
    /// stage_value[t][x_{t-1}][xi_t]; stage 0 has one row.
    std::vector<std::vector<std::vector<double>>> stage_value;
    /// cost_to_go[t][x_t]: worst case of stage_value[t+1][x_t][.]; zero at the last stage.
    std::vector<std::vector<double>> cost_to_go;
    /// Minimizing action per (t, x_{t-1}, xi_t), smallest index on ties.
    std::vector<std::vector<std::vector<Index>>> decision;
};

struct DpSolution {
    double value;
    Policy policy;
    ValueFunctions values;
};

DpSolution solve_dp(const MultistageProblem& prob);

/// Largest Bellman residual over all table entries.
double bellman_residual(const MultistageProblem& prob, const ValueFunctions& v);

/// Throws ValidationError when some action is not allowed after its parent.
void check_policy(const MultistageProblem& prob, const Policy& pi);

/// Total cost per scenario.
RandomVariable policy_cost(const MultistageProblem& prob, const Policy& pi);

double nested_policy_value(const MultistageProblem& prob, const Policy& pi);

/// Throws PreconditionError when some stage set has no vertex list.
double static_policy_value(const MultistageProblem& prob, const Policy& pi);

/// Exact number of feasible policies (as a double to survive overflow).
double policy_count(const MultistageProblem& prob);

inline constexpr std::size_t kPolicyCap = 100000;

/// Calls visit on every feasible policy. Throws CapExceededError when the
/// count exceeds `cap`.
void for_each_policy(const MultistageProblem& prob, const std::function<void(const Policy&)>& visit,
                     std::size_t cap = kPolicyCap);

struct PolicyComparison {
    std::size_t policies = 0;
    double dp_value = 0.0;
    double min_static = 0.0;
    double min_nested = 0.0;
    Policy static_argmin;  // first minimizer in enumeration order
    Policy nested_argmin;
    bool argmins_differ = false;  // no policy minimizes both
    bool inequality_holds = false;  // min_static <= min_nested + 1e-9
    bool dp_matches = false;        // |dp_value - min_nested| <= 1e-9
};

PolicyComparison compare_min_static_vs_min_nested(const MultistageProblem& prob, std::size_t cap = kPolicyCap);

struct NecessityReport {
    bool skipped = false;
    std::string note;
    std::size_t policies = 0;
    std::size_t optimal_policies = 0;
    std::size_t violations = 0;
    /// The extracted policy reaches the optimum and satisfies the argmin rule.
    bool sufficiency_holds = false;
};

/// Every optimal policy must pick a minimizing action at each node whose
/// history is charged by the stage sets. Skipped unless every stage set is
/// strictly monotone with respect to its normalized reference measure.
NecessityReport verify_optimality_necessity(const MultistageProblem& prob, std::size_t cap = kPolicyCap);

struct WeakDuality {
    double max_min;  // max over vertex products Q of min over policies of E_Q
    double min_max;  // min over policies of the static value
    bool holds;
};

WeakDuality weak_duality_check(const MultistageProblem& prob, std::size_t cap = kPolicyCap);

/// Coin, then an adversary that sees the coin. Committing at the second stage
/// costs 0.05 and a wrong guess 1; hedging costs 1 in every case. The best
/// static value is 0.55 (guess the coin), the best nested value 1 (hedge).
MultistageProblem witness_problem();

namespace gen {

struct ProblemShape {
    std::size_t max_stages = 3;
    std::size_t max_outcomes = 3;
    std::size_t max_actions = 3;
    /// Draw strictly monotone stage sets (AVaR below the smallest mass, or
    /// finite families whose members all have full support).
    bool strict = false;
};

/// Redraws until the policy count is at most `cap`.
MultistageProblem multistage_problem(Rng& rng, const ProblemShape& shape, std::size_t cap = 2000);

}  // namespace gen

}  // namespace drmo
