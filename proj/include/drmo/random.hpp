#pragma once

// Random instance generators shared by the verification batteries and tests.

#include "drmo/ambiguity.hpp"
#include "drmo/measure.hpp"
#include "drmo/rng.hpp"

namespace drmo::gen {

/// Each outcome is zeroed with probability `zero_chance`; at least one keeps mass.
DiscreteMeasure probability(Rng& rng, std::size_t n, double zero_chance = 0.0);
RandomVariable variable(Rng& rng, std::size_t n, double lo = -5.0, double hi = 5.0);
/// Random labels in [0, max_atoms).
Partition partition(Rng& rng, std::size_t n, std::size_t max_atoms);
/// Random coarsening: every atom of `fine` joins one of at most `groups` classes.
Partition coarsen(Rng& rng, const Partition& fine, std::size_t groups);
/// Trivial first stage, singletons last, random coarsenings in between.
Filtration filtration(Rng& rng, std::size_t n, std::size_t stages);
/// Points in the unit square with Euclidean distances.
FiniteSpace metric_space(Rng& rng, std::size_t n);
AmbiguitySet ambiguity_set(Rng& rng, AmbiguityKind kind, std::size_t n);

}  // namespace drmo::gen
