#include "drmo/avar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drmo/error.hpp"
#include "drmo/lp.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

void AvarSpec::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("AVaR level must lie in [0, 1]");
    if (!reference.is_probability()) throw ValidationError("AVaR reference must be a probability");
}

AvarPrimal avar_primal(const AvarSpec& spec, const RandomVariable& z) {
    spec.validate();
    const auto& p = spec.reference;
    if (z.size() != p.size()) throw ValidationError("random variable and reference live on different spaces");
    if (!z.is_finite()) throw ValidationError("AVaR requires a finite random variable");

    std::vector<double> breakpoints;
    for (Index i = 0; i < z.size(); ++i)
        if (p[i] > 0.0) breakpoints.push_back(z[i]);
    std::sort(breakpoints.begin(), breakpoints.end());

    if (spec.alpha == 1.0) return {breakpoints.back(), breakpoints.back()};

    const double scale = 1.0 / (1.0 - spec.alpha);
    auto objective = [&](double tau) {
        double excess = 0.0;
        for (Index i = 0; i < z.size(); ++i) excess += p[i] * std::max(z[i] - tau, 0.0);
        return tau + scale * excess;
    };
    AvarPrimal best{kInf, 0.0};
    for (double tau : breakpoints) {
        const double v = objective(tau);
        // Ascending scan: only a strict improvement moves tau.
        if (v < best.value - 1e-12 * (1.0 + std::abs(v))) best = {v, tau};
    }
    return best;
}

double avar_dual(const AvarSpec& spec, const RandomVariable& z) {
    spec.validate();
    if (spec.alpha >= 1.0) throw PreconditionError("the density form of AVaR needs alpha < 1");
    const auto& p = spec.reference;
    if (z.size() != p.size()) throw ValidationError("random variable and reference live on different spaces");
    const std::size_t n = z.size();
    lp::LinearProgram prog(n, lp::Direction::Maximize);
    std::vector<double> c(n), mass(n);
    for (Index i = 0; i < n; ++i) {
        c[i] = p[i] * z[i];
        mass[i] = p[i];
        prog.set_bounds(i, 0.0, 1.0 / (1.0 - spec.alpha));
    }
    prog.set_objective(std::move(c));
    prog.add_constraint(std::move(mass), lp::Sense::Equal, 1.0);
    const auto s = lp::solve(prog);
    if (s.status != lp::Status::Optimal) throw InternalError("AVaR density LP is not optimal");
    return s.value;
}

DiscreteMeasure avar_maximizer(const AvarSpec& spec, const RandomVariable& z) {
    spec.validate();
    const auto& p = spec.reference;
    const std::size_t n = z.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return z[a] > z[b]; });
    std::vector<double> q(n, 0.0);
    if (spec.alpha == 1.0) {
        for (Index i : order)
            if (p[i] > 0.0) {
                q[i] = 1.0;
                break;
            }
        return DiscreteMeasure(std::move(q));
    }
    double left = 1.0;
    for (Index i : order) {
        if (left <= 0.0) break;
        const double take = std::min(left, p[i] / (1.0 - spec.alpha));
        q[i] = take;
        left -= take;
    }
    return DiscreteMeasure(std::move(q));
}

}  // namespace drmo
