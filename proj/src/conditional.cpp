#include "drmo/conditional.hpp"

#include <algorithm>
#include <cmath>

#include "drmo/error.hpp"
#include "drmo/random.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

namespace {

void check_inputs(const AmbiguitySet& m, const RandomVariable& z, const Partition& g) {
    if (z.size() != m.space_size() || g.space_size() != m.space_size())
        throw ValidationError("ambiguity set, random variable and partition live on different spaces");
    if (!z.is_finite()) throw ValidationError("conditional functionals require a finite random variable");
}

ConditionalValue finish(const Partition& g, std::vector<double> per_atom) {
    ConditionalValue out{g, std::move(per_atom), true};
    for (double v : out.per_atom) out.te_holds = out.te_holds && v != kNegInf;
    return out;
}

double fractional_atom(const AmbiguitySet& m, const RandomVariable& z, const std::vector<Index>& atom) {
    const auto& poly = m.polytope();
    std::vector<double> zu(m.space_size(), 0.0), one(m.space_size(), 0.0);
    for (Index i : atom) {
        zu[i] = z[i];
        one[i] = 1.0;
    }
    const auto r = lp::solve_linear_fractional({poly.pull_back(zu), 0.0}, {poly.pull_back(one), 0.0}, poly.system);
    switch (r.status) {
        case lp::FractionalStatus::Optimal: return r.value;
        case lp::FractionalStatus::Unreachable: return kNegInf;
        case lp::FractionalStatus::Unbounded: break;
    }
    throw InternalError("conditional supremum is unbounded on a bounded measure set");
}

}  // namespace

ConditionalValue conditional_robust_lp(const AmbiguitySet& m, const RandomVariable& z, const Partition& g) {
    check_inputs(m, z, g);
    std::vector<double> per_atom(g.atom_count());
    for (Index k = 0; k < g.atom_count(); ++k) per_atom[k] = fractional_atom(m, z, g.atom(k));
    return finish(g, std::move(per_atom));
}

ConditionalValue conditional_robust(const AmbiguitySet& m, const RandomVariable& z, const Partition& g) {
    check_inputs(m, z, g);
    if (m.kind() != AmbiguityKind::FiniteFamily) return conditional_robust_lp(m, z, g);

    // A ratio of linear forms over a convex hull peaks at a generator.
    std::vector<double> per_atom(g.atom_count(), kNegInf);
    for (const auto& q : m.as<FiniteFamily>().members) {
        for (Index k = 0; k < g.atom_count(); ++k) {
            double mass = 0.0, integral = 0.0;
            for (Index i : g.atom(k)) {
                mass += q[i];
                integral += q[i] * z[i];
            }
            if (mass > 0.0) per_atom[k] = std::max(per_atom[k], integral / mass);
        }
    }
    return finish(g, std::move(per_atom));
}

bool has_property_P(const AmbiguitySet& m, const Partition& g) {
    if (g.space_size() != m.space_size()) throw ValidationError("partition and ambiguity set live on different spaces");
    const auto& poly = m.polytope();
    for (const auto& atom : g.atoms()) {
        for (Index target : atom) {
            lp::LinearProgram prog = poly.system;
            prog.set_direction(lp::Direction::Maximize);
            prog.set_objective(poly.map[target]);
            for (Index other : atom)
                if (other != target) prog.add_constraint(poly.map[other], lp::Sense::Equal, 0.0);
            const auto s = lp::solve(prog);
            if (s.status != lp::Status::Optimal || s.value <= tol::kEqual) return false;
        }
    }
    return true;
}

ConditionalValue conditional_avar_nested(const AvarSpec& spec, const RandomVariable& z, const Partition& g) {
    spec.validate();
    const auto& p = spec.reference;
    if (z.size() != p.size() || g.space_size() != p.size())
        throw ValidationError("reference, random variable and partition live on different spaces");
    std::vector<double> per_atom(g.atom_count());
    for (Index k = 0; k < g.atom_count(); ++k) {
        const auto& atom = g.atom(k);
        const double mass = p.mass(atom);
        if (mass <= 0.0) {
            per_atom[k] = kNegInf;
            continue;
        }
        std::vector<double> w, v;
        for (Index i : atom) {
            w.push_back(p[i] / mass);
            v.push_back(z[i]);
        }
        per_atom[k] = avar_primal({spec.alpha, DiscreteMeasure(std::move(w))}, RandomVariable(std::move(v))).value;
    }
    return finish(g, std::move(per_atom));
}

std::vector<double> atom_max(const RandomVariable& z, const Partition& g, const DiscreteMeasure& weights) {
    std::vector<double> out(g.atom_count(), kNegInf);
    for (Index k = 0; k < g.atom_count(); ++k)
        for (Index i : g.atom(k))
            if (weights[i] > 0.0) out[k] = std::max(out[k], z[i]);
    return out;
}

TowerCheck tower_upper_bound_check(const AmbiguitySet& m, const RandomVariable& z, const Partition& g) {
    const auto c = conditional_robust(m, z, g);
    if (!c.te_holds) throw PreconditionError("conditional value is -inf on an unreachable atom");
    const double lhs = robust_expectation(m, z).value;
    const double rhs = robust_expectation(m, RandomVariable(c.expanded().values())).value;
    return {lhs, rhs, lhs <= rhs + tol::kEqual};
}

StrictPropagationReport conditional_strict_monotonicity_check(const AmbiguitySet& m, const Partition& g,
                                                              const DiscreteMeasure& p, std::size_t trials,
                                                              Rng& rng) {
    StrictPropagationReport rep;
    const auto sm = is_strictly_monotone(m, p);
    rep.epsilon = sm.epsilon;
    if (!sm.strict) {
        rep.skipped = true;
        rep.note = "ambiguity set is not strictly monotone: outcome " + std::to_string(sm.outcome) +
                   " gets zero mass under a member";
        return rep;
    }
    const std::vector<Index> charged = p.support();
    const std::size_t n = m.space_size();
    for (std::size_t t = 0; t < trials; ++t) {
        const RandomVariable z = gen::variable(rng, n);
        std::vector<double> bump(n, 0.0);
        const double gamma = rng.uniform(0.1, 2.0);
        bump[charged[rng.index(charged.size())]] = gamma;
        for (Index i : charged)
            if (rng.coin(0.3)) bump[i] = gamma;
        const RandomVariable zp = z + RandomVariable(bump);

        const auto before = conditional_robust(m, z, g);
        const auto after = conditional_robust(m, zp, g);
        bool ok = true;
        for (Index k = 0; k < g.atom_count(); ++k) {
            const double b = before.per_atom[k], a = after.per_atom[k];
            if (b == kNegInf && a == kNegInf) continue;
            bool meets = false;
            for (Index i : g.atom(k)) meets = meets || bump[i] > 0.0;
            const double floor = meets ? gamma * sm.epsilon : 0.0;
            if (!(a >= b + floor - 1e-9)) ok = false;
            if (meets && !(a > b + tol::kEqual)) ok = false;
        }
        ++rep.trials;
        if (!ok) ++rep.violations;
    }
    return rep;
}

}  // namespace drmo
