#pragma once

// Multistage functionals: composition of conditional functionals along a
// filtration, the stagewise (rectangular) recursion, and scenario-tree nesting.

#include <optional>
#include <vector>

#include "drmo/ambiguity.hpp"
#include "drmo/measure.hpp"
#include "drmo/tree.hpp"

namespace drmo {

struct CompositeResult {
    double value;
    /// stage_values[t] is the conditional value given stage t of the
    /// filtration; stage_values[0] is constant and equals `value`.
    std::vector<RandomVariable> stage_values;
};

/// Folds conditional_robust backward over the filtration, starting from the
/// last stage. Throws UnreachableAtomError on a -inf atom.
CompositeResult composite_functional(const AmbiguitySet& m, const Filtration& f, const RandomVariable& z);

struct Comparison {
    double lower;  // R(Z)
    double upper;  // composite value
    bool holds;    // lower <= upper + 1e-9
};

Comparison composite_dominates_static(const AmbiguitySet& m, const Filtration& f, const RandomVariable& z);

/// Stage spaces and one marginal set per stage. Scenarios are tuples of stage
/// outcomes, numbered lexicographically with stage 1 most significant.
struct RectangularSpec {
    std::vector<AmbiguitySet> stages;

    std::size_t stage_count() const { return stages.size(); }
    std::vector<std::size_t> dims() const;
    std::size_t scenario_count() const;
    /// Throws ValidationError when empty.
    void validate() const;
};

Index scenario_index(const std::vector<std::size_t>& dims, const std::vector<Index>& tuple);
std::vector<Index> scenario_tuple(const std::vector<std::size_t>& dims, Index scenario);

/// Stage k (k = 0..T) groups scenarios by their first k coordinates.
Filtration product_filtration(const RectangularSpec& spec);

struct NestedResult {
    double value;
    /// tables[t] holds Z_t indexed by histories of length t; tables[0] = {value}
    /// and tables[T] = Z.
    std::vector<std::vector<double>> tables;
};

NestedResult rectangular_nested(const RectangularSpec& spec, const RandomVariable& z);

/// Stage vertex lists; nullopt when some stage cannot be enumerated.
std::optional<std::vector<std::vector<DiscreteMeasure>>> stage_vertices(const RectangularSpec& spec);

/// Product of one measure per stage as a measure on the scenario space.
DiscreteMeasure product_measure(const std::vector<DiscreteMeasure>& marginals);

/// The product set as a finite family of products of stage vertices.
AmbiguitySet product_family(const RectangularSpec& spec);

struct EquivalenceCheck {
    double nested;
    double composite;
    bool holds;  // |nested - composite| <= 1e-7
};

EquivalenceCheck rectangular_equivalence_check(const RectangularSpec& spec, const RandomVariable& z);

struct StaticResult {
    double value;
    std::vector<DiscreteMeasure> argmax;  // one measure per stage
    bool heuristic;  // true when some stage had no vertex list
};

/// sup over products Q_1 x ... x Q_T of E[Z]: exact scan over vertex tuples,
/// or alternating stagewise maximization with restarts.
StaticResult static_rectangular(const RectangularSpec& spec, const RandomVariable& z);

/// Stage k of the result is stage perm[k] of the input.
RectangularSpec permute_stages(const RectangularSpec& spec, const std::vector<std::size_t>& perm);
RandomVariable permute_scenarios(const RectangularSpec& spec, const RandomVariable& z,
                                 const std::vector<std::size_t>& perm);

struct PermutationCheck {
    std::vector<double> static_values;
    std::vector<double> nested_values;
    bool static_invariant;  // all static values within 1e-9
    bool nested_changed;    // some nested value moved by more than 1e-9
    double nested_spread;
};

/// Evaluates the identity order followed by every listed permutation.
PermutationCheck permutation_invariance_check(const RectangularSpec& spec, const RandomVariable& z,
                                              const std::vector<std::vector<std::size_t>>& perms);

struct InducedSet {
    std::vector<DiscreteMeasure> measures;
    std::size_t pre_dedup_count;
    /// Products with a constant selector (stage-2 measure independent of xi_1).
    std::vector<DiscreteMeasure> family_one;
};

/// Two stages: every first-stage vertex combined with every selector that
/// picks a stage-2 vertex per first-stage outcome. m1 * m2^n candidates.
InducedSet induced_set(const RectangularSpec& spec, std::size_t cap = 1000000);

/// Scenario tree with an ambiguity set over the children of each inner node.
struct HistoryDependentSpec {
    ScenarioTree tree;
    std::vector<std::optional<AmbiguitySet>> node_sets;  // indexed by node

    void validate() const;
};

struct TreeNestedResult {
    double value;
    std::vector<double> node_values;
};

/// Backward recursion on the tree; z is indexed by scenario (leaf order).
TreeNestedResult nested_on_tree(const HistoryDependentSpec& spec, const RandomVariable& z);

}  // namespace drmo
