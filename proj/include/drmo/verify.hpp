#pragma once

// The invariant battery: one randomized or witness-based check per acceptance
// criterion, driven by a seed so runs are reproducible.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drmo/composite.hpp"

namespace drmo::verify {

struct Options {
    std::uint64_t seed = 42;
    /// Overrides the main trial count of every battery; 0 makes them vacuous.
    std::optional<std::size_t> trials;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::size_t trials = 0;
    /// Worst residual against the criterion's tolerance (meaning varies by criterion).
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;
    std::vector<std::string> warnings;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id, const Options& options);
std::vector<CriterionResult> run_all(const Options& options);

/// Fair coin at the first stage, an adversary choosing the second outcome
/// after seeing it, and Z = 1 when the two outcomes match.
struct GapWitness {
    RectangularSpec spec;
    RandomVariable z;
};

GapWitness strict_gap_witness();

}  // namespace drmo::verify
