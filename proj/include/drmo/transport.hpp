#pragma once

// Order-1 Wasserstein distance on finite metric spaces and the Lipschitz
// bounds it yields for Wasserstein ambiguity, single- and multistage.

#include <string>
#include <vector>

#include "drmo/ambiguity.hpp"
#include "drmo/composite.hpp"
#include "drmo/measure.hpp"
#include "drmo/rng.hpp"

namespace drmo {

struct TransportPlan {
    std::vector<std::vector<double>> pi;  // pi[i][j]: mass moved from i to j
    double cost = 0.0;

    std::vector<double> row_sums() const;
    std::vector<double> column_sums() const;
};

struct W1Result {
    double distance;
    TransportPlan plan;
    /// Optimal potential f with f(i) - f(j) <= d(i,j), f(0) = 0, and its
    /// value sum_i f(i) (P(i) - Q(i)), solved as a separate LP.
    std::vector<double> potential;
    double dual;
};

/// Throws ValidationError when the space has no metric or the inputs are not
/// probabilities on it.
W1Result wasserstein_1(const DiscreteMeasure& p, const DiscreteMeasure& q, const FiniteSpace& space);

/// max |Z(i) - Z(j)| / d(i,j) over pairs with d > 0; +inf when two outcomes at
/// distance zero carry different values.
double lipschitz_constant(const FiniteSpace& space, const RandomVariable& z);

struct KrCheck {
    double lhs;  // |E_Q Z - E_P Z|
    double rhs;  // L_Z * d(P, Q)
    double lipschitz;
    bool vacuous;  // L_Z is infinite
    bool holds;
};

KrCheck kr_bound_check(const DiscreteMeasure& p, const DiscreteMeasure& q, const FiniteSpace& space,
                       const RandomVariable& z);

struct BallGapCheck {
    double epsilon;
    double gap;    // worst case over the ball minus E_P Z
    double bound;  // L_Z * epsilon
    double lipschitz;
    bool vacuous;
    bool holds;
};

BallGapCheck ball_robust_gap_check(const DiscreteMeasure& center, double epsilon, const FiniteSpace& space,
                                   const RandomVariable& z);

struct BallGapSweep {
    std::vector<BallGapCheck> rows;
    bool all_hold;
    bool monotone;  // gap nondecreasing along the (sorted) grid
};

/// `steps` + 1 evenly spaced radii from 0 to 1.2 times the diameter.
std::vector<double> epsilon_grid(const FiniteSpace& space, std::size_t steps);

BallGapSweep ball_gap_sweep(const DiscreteMeasure& center, const std::vector<double>& epsilons,
                            const FiniteSpace& space, const RandomVariable& z);

struct MultistageBoundSpec {
    std::vector<double> epsilon;  // per-stage radius
    std::vector<double> kappa;    // per-stage Lipschitz modulus of the transitions
    std::vector<double> weights;  // per-stage weight in the Lipschitz certificate
    double lipschitz = 1.0;

    std::size_t stage_count() const { return epsilon.size(); }
    void validate() const;
};

/// L_Z sum_t eps_t w_t prod_{s>t} (1 + w_s kappa_s).
double multistage_bound(const MultistageBoundSpec& spec);

/// L_Z sum_t eps_t w_t: the value for stagewise independent references.
double stagewise_bound(const MultistageBoundSpec& spec);

/// Reference process on a product of metric stage spaces. transitions[t][h]
/// is the law of stage t given the history h, numbered lexicographically over
/// the first t stages (a single history at t = 0).
struct TransitionModel {
    std::vector<FiniteSpace> stages;
    std::vector<std::vector<DiscreteMeasure>> transitions;

    std::size_t stage_count() const { return stages.size(); }
    std::vector<std::size_t> dims() const;
    std::size_t history_count(std::size_t stage) const;
    std::size_t scenario_count() const;
    void validate() const;
};

/// sum_{s<stage} w_s d_s between two histories of length `stage`.
double history_distance(const TransitionModel& model, const std::vector<double>& weights, std::size_t stage,
                        Index h, Index other);

/// Smallest kappa_t with d(P^h, P^h') <= kappa_t d(h, h'); kappa_0 = 0.
std::vector<double> transition_kappa(const TransitionModel& model, const std::vector<double>& weights);

/// Throws ValidationError naming the first pair of histories whose
/// transitions are further apart than kappa allows.
void check_transition_lipschitz(const TransitionModel& model, const MultistageBoundSpec& spec);

/// Throws ValidationError naming the first pair of scenarios with
/// |Z(s) - Z(s')| > L_Z sum_t w_t d_t(s_t, s'_t).
void check_objective_lipschitz(const TransitionModel& model, const MultistageBoundSpec& spec, const RandomVariable& z);

/// Node sets on the product tree: at history h the transitions Q with
/// d(Q, P^h') <= eps_t + kappa_t d(h, h') for every history h' of that stage.
HistoryDependentSpec wasserstein_tree(const TransitionModel& model, const MultistageBoundSpec& spec);

/// The reference process itself as a tree of singletons.
HistoryDependentSpec reference_tree(const TransitionModel& model);

struct MultistageCheck {
    double nested;     // nested worst case over the tree of balls
    double reference;  // E_P Z
    double gap;        // |nested - reference|
    double bound;
    bool holds;        // gap <= bound + 1e-7
};

MultistageCheck multistage_bound_empirical_check(const TransitionModel& model, const MultistageBoundSpec& spec,
                                                 const RandomVariable& z);

namespace gen {

/// Random stage spaces in the unit square and random transitions per history.
TransitionModel transition_model(Rng& rng, const std::vector<std::size_t>& dims);

/// Same stage spaces, one law per stage shared by every history.
TransitionModel independent_model(Rng& rng, const std::vector<std::size_t>& dims);

/// L * min_k (c_k + sum_t w_t d_t(xi_t, a_kt)): Lipschitz with the weighted
/// certificate by construction.
RandomVariable lipschitz_objective(Rng& rng, const TransitionModel& model, const std::vector<double>& weights,
                                   double lipschitz);

}  // namespace gen

}  // namespace drmo
