#include "doctest.h"

#include <cmath>
#include <vector>

#include "drmo/conditional.hpp"
#include "drmo/error.hpp"
#include "drmo/random.hpp"

using namespace drmo;

namespace {

const RandomVariable kZ({1, 5, 2, 7});
const Partition kPairs(4, {{0, 1}, {2, 3}});

const std::vector<AmbiguityKind> kKinds{AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment,
                                        AmbiguityKind::Wasserstein};

// Brute force: a fine grid over the mixing weights of two or three members.
double grid_conditional(const FiniteFamily& f, const RandomVariable& z, const std::vector<Index>& atom) {
    const std::size_t m = f.members.size();
    double best = kNegInf;
    const int steps = 40;
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; b <= (m >= 3 ? steps - a : 0); ++b) {
            std::vector<double> lambda(m, 0.0);
            lambda[0] = a / double(steps);
            if (m >= 2) lambda[1] = m >= 3 ? b / double(steps) : 1.0 - lambda[0];
            if (m >= 3) lambda[2] = 1.0 - lambda[0] - lambda[1];
            double mass = 0, integral = 0;
            for (Index k = 0; k < std::min<std::size_t>(m, 3); ++k)
                for (Index i : atom) {
                    mass += lambda[k] * f.members[k][i];
                    integral += lambda[k] * f.members[k][i] * z[i];
                }
            if (mass > 1e-12) best = std::max(best, integral / mass);
        }
    return best;
}

}  // namespace

TEST_CASE("conditional examples") {
    auto simplex = conditional_robust(AmbiguitySet::simplex(4), kZ, kPairs);
    CHECK(simplex.per_atom == std::vector<double>{5, 7});
    CHECK(simplex.expanded().values() == std::vector<double>{5, 5, 7, 7});
    CHECK(simplex.te_holds);

    auto avar = AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(4));
    auto a = conditional_robust(avar, kZ, kPairs);
    CHECK(a.per_atom[0] == doctest::Approx(5));
    CHECK(a.per_atom[1] == doctest::Approx(7));
    CHECK(has_property_P(avar, kPairs));

    Rng rng(41);
    for (auto kind : kKinds) {
        auto m = gen::ambiguity_set(rng, kind, 4);
        auto z = gen::variable(rng, 4);
        auto t = conditional_robust(m, z, Partition::trivial(4));
        CHECK(std::abs(t.per_atom[0] - robust_expectation(m, z).value) <= 1e-7);
    }
}

TEST_CASE("unreachable atoms are -inf and break translation equivariance") {
    auto m = AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.5, 0, 0}), DiscreteMeasure({1, 0, 0, 0})});
    auto c = conditional_robust(m, kZ, kPairs);
    CHECK(c.per_atom[0] == 3);
    CHECK(c.per_atom[1] == kNegInf);
    CHECK_FALSE(c.te_holds);
    auto lp = conditional_robust_lp(m, kZ, kPairs);
    CHECK(lp.per_atom[1] == kNegInf);
    CHECK_THROWS_AS(tower_upper_bound_check(m, kZ, kPairs), PreconditionError);
}

TEST_CASE("member scan and Charnes-Cooper agree with a grid oracle") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.between(2, 6);
        auto m = gen::ambiguity_set(rng, AmbiguityKind::FiniteFamily, n);
        auto z = gen::variable(rng, n);
        auto g = gen::partition(rng, n, 3);
        auto scan = conditional_robust(m, z, g);
        auto lp = conditional_robust_lp(m, z, g);
        for (Index k = 0; k < g.atom_count(); ++k) {
            if (scan.per_atom[k] == kNegInf) {
                CHECK(lp.per_atom[k] == kNegInf);
                continue;
            }
            CHECK(std::abs(scan.per_atom[k] - lp.per_atom[k]) <= 1e-7);
            const double grid = grid_conditional(m.as<FiniteFamily>(), z, g.atom(k));
            CHECK(grid <= scan.per_atom[k] + 1e-9);
            if (m.as<FiniteFamily>().members.size() <= 3) CHECK(std::abs(grid - scan.per_atom[k]) <= 1e-9);
        }
    }
}

TEST_CASE("property P examples") {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = rng.between(2, 6);
        CHECK(has_property_P(AmbiguitySet::simplex(n), gen::partition(rng, n, 3)));
    }
    CHECK(has_property_P(AmbiguitySet::avar(0.6, DiscreteMeasure({0.2, 0.3, 0.1, 0.4})), Partition(4, {{0, 1}, {2, 3}})));
    CHECK_FALSE(has_property_P(AmbiguitySet::singleton(DiscreteMeasure::uniform(4)), kPairs));
    CHECK(has_property_P(AmbiguitySet::singleton(DiscreteMeasure::uniform(4)), Partition::singletons(4)));
}

TEST_CASE("property P forces atom maxima independent of the reference") {
    Rng rng(44);
    int hits = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng.between(2, 6);
        auto g = gen::partition(rng, n, n);
        auto p = gen::probability(rng, n);
        double largest = 0;
        for (const auto& atom : g.atoms()) largest = std::max(largest, p.mass(atom));
        const double alpha = std::min(0.95, largest + rng.uniform(0.0, 0.2));
        auto m = AmbiguitySet::avar(alpha, p);
        if (!has_property_P(m, g)) continue;
        ++hits;
        auto z = gen::variable(rng, n);
        auto c = conditional_robust(m, z, g);
        auto expect = atom_max(z, g, p);
        for (Index k = 0; k < g.atom_count(); ++k) CHECK(std::abs(c.per_atom[k] - expect[k]) <= 1e-9);

        std::vector<double> w(p.weights());
        for (auto& x : w) x *= rng.uniform(0.9, 1.1);
        auto moved = AmbiguitySet::avar(alpha, DiscreteMeasure(w).normalized());
        if (!has_property_P(moved, g)) continue;
        auto c2 = conditional_robust(moved, z, g);
        for (Index k = 0; k < g.atom_count(); ++k) CHECK(std::abs(c2.per_atom[k] - c.per_atom[k]) <= 1e-9);
    }
    CHECK(hits > 100);
}

TEST_CASE("singleton partition returns Z where reachable") {
    Rng rng(45);
    for (auto kind : kKinds) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = rng.between(2, 5);
            auto m = gen::ambiguity_set(rng, kind, n);
            auto z = gen::variable(rng, n);
            auto c = conditional_robust(m, z, Partition::singletons(n));
            auto mu = reference_measure(m).mu;
            for (Index i = 0; i < n; ++i) {
                if (mu[i] > 1e-9)
                    CHECK(std::abs(c.per_atom[i] - z[i]) <= 1e-9);
                else
                    CHECK(c.per_atom[i] == kNegInf);
            }
        }
    }
}

TEST_CASE("translation by measurable variables when every atom is reachable") {
    Rng rng(46);
    for (auto kind : kKinds) {
        for (int trial = 0; trial < 15; ++trial) {
            const std::size_t n = rng.between(2, 5);
            auto m = gen::ambiguity_set(rng, kind, n);
            auto g = gen::partition(rng, n, 3);
            auto z = gen::variable(rng, n);
            auto c = conditional_robust(m, z, g);
            bool reachable = true;
            auto mu = reference_measure(m).mu;
            for (const auto& atom : g.atoms()) reachable = reachable && mu.mass(atom) > 1e-9;
            CHECK(c.te_holds == reachable);
            if (!c.te_holds) continue;
            std::vector<double> shift(g.atom_count());
            for (auto& s : shift) s = rng.uniform(-3, 3);
            RandomVariable y(g.expand(shift).values());
            auto moved = conditional_robust(m, z + y, g);
            for (Index k = 0; k < g.atom_count(); ++k)
                CHECK(std::abs(moved.per_atom[k] - c.per_atom[k] - shift[k]) <= 1e-7);
        }
    }
}

TEST_CASE("nested conditional AVaR examples") {
    const auto p = DiscreteMeasure::uniform(4);
    auto mean = conditional_avar_nested({0.0, p}, kZ, kPairs);
    CHECK(mean.per_atom == std::vector<double>{3, 4.5});
    auto high = conditional_avar_nested({0.99, p}, kZ, kPairs);
    CHECK(high.per_atom[0] == doctest::Approx(5));
    CHECK(high.per_atom[1] == doctest::Approx(7));
    auto half = conditional_avar_nested({0.5, p}, kZ, kPairs);
    CHECK(half.per_atom[0] == doctest::Approx(5));
    CHECK(half.per_atom[1] == doctest::Approx(7));

    auto null_atom = conditional_avar_nested({0.5, DiscreteMeasure({0.5, 0.5, 0, 0})}, kZ, kPairs);
    CHECK(null_atom.per_atom[1] == kNegInf);
    CHECK_FALSE(null_atom.te_holds);
}

TEST_CASE("nested AVaR differs from the conditional functional of the AVaR set") {
    const auto p = DiscreteMeasure::uniform(4);
    auto set = AmbiguitySet::avar(0.5, p);
    // Configured pair: level 0.5 set against atom-level 0 nesting.
    auto robust = conditional_robust(set, kZ, kPairs);
    auto nested = conditional_avar_nested({0.0, p}, kZ, kPairs);
    CHECK(robust.expanded().values() == std::vector<double>{5, 5, 7, 7});
    CHECK(nested.expanded().values() == std::vector<double>{3, 3, 4.5, 4.5});

    // Same level on both sides.
    const Partition g(4, {{0, 1, 2}, {3}});
    const RandomVariable z({1, 2, 3, 0});
    auto r = conditional_robust(set, z, g);
    auto n = conditional_avar_nested({0.5, p}, z, g);
    CHECK(r.per_atom[0] == doctest::Approx(3));
    CHECK(n.per_atom[0] == doctest::Approx(8.0 / 3));
}

TEST_CASE("tower upper bound on random instances") {
    Rng rng(47);
    for (auto kind : kKinds) {
        int checked = 0;
        for (int trial = 0; trial < 60 && checked < 25; ++trial) {
            const std::size_t n = rng.between(2, 5);
            auto m = gen::ambiguity_set(rng, kind, n);
            auto g = gen::partition(rng, n, 3);
            auto z = gen::variable(rng, n);
            if (!conditional_robust(m, z, g).te_holds) continue;
            auto t = tower_upper_bound_check(m, z, g);
            CHECK(t.holds);
            ++checked;
        }
        CHECK(checked >= 3);
    }
}

TEST_CASE("strict monotonicity carries over to the conditional functional") {
    Rng rng(48);
    auto m = AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.5}), DiscreteMeasure({0.7, 0.3})});
    auto rep = conditional_strict_monotonicity_check(m, Partition::singletons(2), DiscreteMeasure::uniform(2), 200, rng);
    CHECK_FALSE(rep.skipped);
    CHECK(rep.trials == 200);
    CHECK(rep.violations == 0);
    CHECK(rep.epsilon == doctest::Approx(0.3));

    auto single = conditional_strict_monotonicity_check(AmbiguitySet::singleton(DiscreteMeasure::uniform(4)), kPairs,
                                                        DiscreteMeasure::uniform(4), 100, rng);
    CHECK(single.violations == 0);

    auto skip = conditional_strict_monotonicity_check(AmbiguitySet::simplex(2), Partition::trivial(2),
                                                      DiscreteMeasure::uniform(2), 100, rng);
    CHECK(skip.skipped);
    CHECK(skip.trials == 0);
    CHECK_FALSE(skip.note.empty());

    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = rng.between(2, 5);
        auto p = gen::probability(rng, n);
        // Below the smallest outcome mass no member can drop an outcome.
        double smallest = 1;
        for (double w : p.weights()) smallest = std::min(smallest, w);
        auto avar = AmbiguitySet::avar(rng.uniform(0, 0.9) * smallest, p);
        auto r = conditional_strict_monotonicity_check(avar, gen::partition(rng, n, 3), p, 30, rng);
        CHECK_FALSE(r.skipped);
        CHECK(r.violations == 0);
    }
}
