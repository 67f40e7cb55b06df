#pragma once

namespace drmo::tol {

// Real comparisons throughout the library.
inline constexpr double kEqual = 1e-9;
// Primal feasibility and duality-gap certificates of the LP engine.
inline constexpr double kFeasibility = 1e-7;
// Smallest admissible pivot element.
inline constexpr double kPivot = 1e-10;
// Measure deduplication in the induced-set enumeration.
inline constexpr double kDedup = 1e-12;

}  // namespace drmo::tol
