#pragma once

#include "drmo/ambiguity.hpp"
#include "drmo/rng.hpp"

namespace drmo {

/// Largest violation seen per coherence axiom over a randomized battery.
struct AxiomReport {
    std::size_t trials = 0;
    double subadditivity = 0.0;  // R(Z + Z') - R(Z) - R(Z')
    double monotonicity = 0.0;   // R(Z) - R(Z') for Z <= Z'
    double translation = 0.0;    // |R(Z + a) - R(Z) - a|
    double homogeneity = 0.0;    // |R(l Z) - l R(Z)|, l >= 0
    double lipschitz = 0.0;      // |R(Z') - R(Z)| - sup|Z' - Z|

    double worst() const;
    bool passed(double tol = 1e-7) const { return worst() <= tol; }
};

AxiomReport check_axioms(const AmbiguitySet& m, std::size_t trials, Rng& rng);

}  // namespace drmo
