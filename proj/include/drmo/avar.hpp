#pragma once

// Average Value-at-Risk in its two classical forms.

#include "drmo/measure.hpp"

namespace drmo {

struct AvarSpec {
    double alpha = 0.0;  // in [0, 1]
    DiscreteMeasure reference;

    /// Throws ValidationError unless alpha is in [0, 1] and the reference is a
    /// probability.
    void validate() const;
};

struct AvarPrimal {
    double value;
    double tau;  // smallest minimizer
};

/// inf over tau of tau + E[Z - tau]_+ / (1 - alpha), scanned at the values of
/// Z carried by positive mass. alpha = 1 gives the max over those values.
AvarPrimal avar_primal(const AvarSpec& spec, const RandomVariable& z);

/// sup of E[zeta Z] over densities 0 <= zeta <= 1/(1 - alpha) with E[zeta] = 1,
/// solved as an LP. Requires alpha < 1.
double avar_dual(const AvarSpec& spec, const RandomVariable& z);

/// A maximizing measure of the dual: fills the density cap from the largest
/// value of Z down, ties toward the smaller index.
DiscreteMeasure avar_maximizer(const AvarSpec& spec, const RandomVariable& z);

}  // namespace drmo
