#pragma once

// Conditional worst-case expectations on the atoms of a partition.

#include <string>
#include <vector>

#include "drmo/ambiguity.hpp"
#include "drmo/avar.hpp"
#include "drmo/measure.hpp"
#include "drmo/rng.hpp"

namespace drmo {

/// One extended-real value per atom. -inf marks an atom no measure reaches.
struct ConditionalValue {
    Partition partition;
    std::vector<double> per_atom;
    /// True iff every atom is finite, which is exactly when conditional
    /// translation equivariance holds.
    bool te_holds = true;

    /// Value spread over outcomes.
    RandomVariable expanded() const { return partition.expand(per_atom); }
};

/// Per atom U: sup over Q in M with Q(U) > 0 of E_Q[Z | U]. Finite families
/// scan their members; the other sets solve a linear-fractional program.
ConditionalValue conditional_robust(const AmbiguitySet& m, const RandomVariable& z, const Partition& g);

/// Same values, always through the Charnes-Cooper program over the set's polytope.
ConditionalValue conditional_robust_lp(const AmbiguitySet& m, const RandomVariable& z, const Partition& g);

/// For every atom U and every w in U some member charges w and nothing else in U.
bool has_property_P(const AmbiguitySet& m, const Partition& g);

/// Per atom, AVaR at the same level under the conditional reference law.
ConditionalValue conditional_avar_nested(const AvarSpec& spec, const RandomVariable& z, const Partition& g);

/// Per-atom maximum of Z over outcomes charged by `weights`; -inf on atoms
/// without charged outcomes.
std::vector<double> atom_max(const RandomVariable& z, const Partition& g, const DiscreteMeasure& weights);

struct TowerCheck {
    double lhs;  // R(Z)
    double rhs;  // R(R_G(Z))
    bool holds;
};

/// Throws PreconditionError when the conditional value has -inf atoms.
TowerCheck tower_upper_bound_check(const AmbiguitySet& m, const RandomVariable& z, const Partition& g);

struct StrictPropagationReport {
    bool skipped = false;
    std::string note;
    double epsilon = 0.0;
    std::size_t trials = 0;
    std::size_t violations = 0;
};

/// Z' = Z + gamma 1_A with A a random nonempty set of P-charged outcomes.
/// Every atom must not decrease, and every atom meeting A must rise by at
/// least gamma * epsilon. Skipped when M is not strictly monotone.
StrictPropagationReport conditional_strict_monotonicity_check(const AmbiguitySet& m, const Partition& g,
                                                              const DiscreteMeasure& p, std::size_t trials,
                                                              Rng& rng);

}  // namespace drmo
