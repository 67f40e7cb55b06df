#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "drmo/composite.hpp"
#include "drmo/error.hpp"
#include "drmo/random.hpp"

using namespace drmo;

namespace {

AmbiguitySet dirac_pair() { return AmbiguitySet::finite_family({DiscreteMeasure({1, 0}), DiscreteMeasure({0, 1})}); }

// Strict-gap instance: fair coin first, then an adversary that sees the coin.
RectangularSpec coin_then_choice() {
    return {{AmbiguitySet::singleton(DiscreteMeasure::uniform(2)), dirac_pair()}};
}

// Redraws until every outcome is charged by some member so no history is
// unreachable in the nested recursion.
AmbiguitySet reachable_set(Rng& rng, AmbiguityKind kind, std::size_t n) {
    for (;;) {
        auto m = gen::ambiguity_set(rng, kind, n);
        const auto mu = reference_measure(m).mu;
        bool ok = true;
        for (Index i = 0; i < n; ++i) ok = ok && mu[i] > 1e-9;
        if (ok) return m;
    }
}

// Grid over mixing weights of two-member families at both stages.
double static_grid(const FiniteFamily& a, const FiniteFamily& b, const RandomVariable& z) {
    const int steps = 50;
    double best = kNegInf;
    const std::size_t n2 = b.members[0].size();
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            const double s = i / double(steps), t = j / double(steps);
            double v = 0;
            for (Index x = 0; x < a.members[0].size(); ++x)
                for (Index y = 0; y < n2; ++y) {
                    const double p = s * a.members[0][x] + (1 - s) * a.members[1][x];
                    const double q = t * b.members[0][y] + (1 - t) * b.members[1][y];
                    v += p * q * z[x * n2 + y];
                }
            best = std::max(best, v);
        }
    return best;
}

}  // namespace

TEST_CASE("composite on the full simplex picks the per-history maximum") {
    Filtration f({Partition::trivial(4), Partition(4, {{0, 1}, {2, 3}}), Partition::singletons(4)});
    const RandomVariable z({1, 5, 2, 7});
    auto r = composite_functional(AmbiguitySet::simplex(4), f, z);
    CHECK(r.value == doctest::Approx(7));
    CHECK(r.stage_values[1].values() == std::vector<double>{5, 5, 7, 7});
    CHECK(r.stage_values[2] == z);
}

TEST_CASE("rectangular AVaR example") {
    RectangularSpec spec{{AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(2)),
                          AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(2))}};
    const RandomVariable z({1, 2, 3, 4});
    auto r = rectangular_nested(spec, z);
    CHECK(r.tables[1][0] == doctest::Approx(2));
    CHECK(r.tables[1][1] == doctest::Approx(4));
    CHECK(r.value == doctest::Approx(4));
    auto eq = rectangular_equivalence_check(spec, z);
    CHECK(eq.holds);
    CHECK(eq.composite == doctest::Approx(4));
}

TEST_CASE("scenario numbering and product filtration") {
    const std::vector<std::size_t> dims{2, 3, 2};
    for (Index s = 0; s < 12; ++s) CHECK(scenario_index(dims, scenario_tuple(dims, s)) == s);
    CHECK(scenario_tuple(dims, 7) == std::vector<Index>{1, 0, 1});

    RectangularSpec spec{{AmbiguitySet::simplex(2), AmbiguitySet::simplex(3), AmbiguitySet::simplex(2)}};
    auto f = product_filtration(spec);
    REQUIRE(f.stage_count() == 4);
    CHECK(f.stage(0).is_trivial());
    CHECK(f.stage(1).atom_count() == 2);
    CHECK(f.stage(2).atom_count() == 6);
    CHECK(f.stage(3).is_singletons());
    CHECK(f.stage(2).atom(1) == std::vector<Index>{2, 3});
}

TEST_CASE("strict gap and order dependence witness") {
    const auto spec = coin_then_choice();
    const RandomVariable z({1, 0, 0, 1});
    CHECK(rectangular_nested(spec, z).value == doctest::Approx(1));
    auto s = static_rectangular(spec, z);
    CHECK_FALSE(s.heuristic);
    CHECK(s.value == doctest::Approx(0.5));

    auto cmp = composite_dominates_static(product_family(spec), product_filtration(spec), z);
    CHECK(cmp.holds);
    CHECK(cmp.lower == doctest::Approx(0.5));
    CHECK(cmp.upper == doctest::Approx(1));

    auto p = permutation_invariance_check(spec, z, {{1, 0}});
    CHECK(p.static_invariant);
    CHECK(p.nested_changed);
    CHECK(p.nested_values[1] == doctest::Approx(0.5));
    CHECK(p.nested_spread == doctest::Approx(0.5));
}

TEST_CASE("scenario permutation round trip") {
    Rng rng(5);
    RectangularSpec spec{{AmbiguitySet::simplex(2), AmbiguitySet::simplex(3), AmbiguitySet::simplex(4)}};
    const auto z = gen::variable(rng, 24);
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto w = permute_scenarios(spec, z, perm);
    const auto moved = permute_stages(spec, perm);
    CHECK(moved.dims() == std::vector<std::size_t>{4, 2, 3});
    // Inverse of (2,0,1) is (1,2,0).
    CHECK(permute_scenarios(moved, w, {1, 2, 0}) == z);
    CHECK_THROWS_AS(permute_stages(spec, {0, 0, 1}), ValidationError);
}

TEST_CASE("induced set enumerates every selector product") {
    const auto spec = coin_then_choice();
    auto ind = induced_set(spec);
    CHECK(ind.pre_dedup_count == 1 * 4);
    CHECK(ind.measures.size() == 4);
    CHECK(ind.family_one.size() == 2);

    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n1 = rng.between(2, 3), n2 = rng.between(2, 3);
        RectangularSpec s{{reachable_set(rng, AmbiguityKind::FiniteFamily, n1),
                           reachable_set(rng, AmbiguityKind::FiniteFamily, n2)}};
        const auto z = gen::variable(rng, n1 * n2);
        const auto verts = *stage_vertices(s);
        auto r = induced_set(s);
        std::size_t expect = verts[0].size();
        for (std::size_t i = 0; i < n1; ++i) expect *= verts[1].size();
        CHECK(r.pre_dedup_count == expect);
        CHECK(r.measures.size() <= expect);

        double induced_max = kNegInf, family_max = kNegInf;
        for (const auto& q : r.measures) {
            CHECK(q.is_probability());
            induced_max = std::max(induced_max, expectation(z, q));
        }
        for (const auto& q : r.family_one) family_max = std::max(family_max, expectation(z, q));
        CHECK(std::abs(induced_max - rectangular_nested(s, z).value) <= 1e-9);
        CHECK(std::abs(family_max - static_rectangular(s, z).value) <= 1e-9);
    }
}

TEST_CASE("induced set cap") {
    RectangularSpec spec{{AmbiguitySet::simplex(6), AmbiguitySet::simplex(6)}};
    CHECK_THROWS_AS(induced_set(spec, 1000), CapExceededError);
    RectangularSpec three{{dirac_pair(), dirac_pair(), dirac_pair()}};
    CHECK_THROWS_AS(induced_set(three), PreconditionError);
}

TEST_CASE("static value agrees with a mixing grid") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<DiscreteMeasure> a{gen::probability(rng, 2, 0.0), gen::probability(rng, 2, 0.0)};
        std::vector<DiscreteMeasure> b{gen::probability(rng, 3, 0.0), gen::probability(rng, 3, 0.0)};
        RectangularSpec spec{{AmbiguitySet::finite_family(a), AmbiguitySet::finite_family(b)}};
        const auto z = gen::variable(rng, 6);
        const double grid = static_grid(FiniteFamily{a}, FiniteFamily{b}, z);
        const double exact = static_rectangular(spec, z).value;
        CHECK(exact >= grid - 1e-9);
        CHECK(exact <= grid + 1e-9);
    }
}

TEST_CASE("nested recursion equals the composite of the product family") {
    Rng rng(31);
    const std::vector<AmbiguityKind> kinds{AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment};
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t T = rng.between(2, 3);
        RectangularSpec spec;
        for (std::size_t t = 0; t < T; ++t)
            spec.stages.push_back(reachable_set(rng, kinds[rng.index(kinds.size())], rng.between(2, 3)));
        const auto z = gen::variable(rng, spec.scenario_count());
        auto eq = rectangular_equivalence_check(spec, z);
        CHECK_MESSAGE(eq.holds, "nested " << eq.nested << " composite " << eq.composite);
        auto s = static_rectangular(spec, z);
        CHECK_FALSE(s.heuristic);
        CHECK(s.value <= eq.nested + 1e-9);
    }
}

TEST_CASE("wasserstein stages fall back to the flagged heuristic") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        RectangularSpec spec{{reachable_set(rng, AmbiguityKind::Wasserstein, 3),
                              reachable_set(rng, AmbiguityKind::FiniteFamily, 2)}};
        const auto z = gen::variable(rng, 6);
        auto s = static_rectangular(spec, z);
        CHECK(s.heuristic);
        CHECK(s.value <= rectangular_nested(spec, z).value + 1e-7);
        // The reported maximizer must realize the reported value.
        CHECK(std::abs(expectation(z, product_measure(s.argmax)) - s.value) <= 1e-7);
        CHECK_THROWS_AS(rectangular_equivalence_check(spec, z), PreconditionError);
    }
}

TEST_CASE("composite dominates the static functional") {
    Rng rng(43);
    const std::vector<AmbiguityKind> kinds{AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment,
                                           AmbiguityKind::Wasserstein};
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = rng.between(3, 6);
        auto m = reachable_set(rng, kinds[trial % kinds.size()], n);
        auto f = gen::filtration(rng, n, rng.between(2, 4));
        const auto z = gen::variable(rng, n);
        auto c = composite_dominates_static(m, f, z);
        CHECK(c.holds);
    }
}

TEST_CASE("unreachable history aborts the fold") {
    auto m = AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.5, 0, 0})});
    Filtration f({Partition::trivial(4), Partition(4, {{0, 1}, {2, 3}}), Partition::singletons(4)});
    try {
        composite_functional(m, f, RandomVariable({1, 2, 3, 4}));
        FAIL("expected an unreachable atom");
    } catch (const UnreachableAtomError& e) {
        CHECK(e.stage() == 2);
        CHECK(e.atom() == 2);
    }
}

TEST_CASE("tree recursion matches the rectangular recursion on product trees") {
    Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        RectangularSpec spec{{reachable_set(rng, AmbiguityKind::Avar, 2), reachable_set(rng, AmbiguityKind::Moment, 3)}};
        const std::vector<std::size_t> branching{2, 3};
        HistoryDependentSpec h{ScenarioTree::product(branching), {}};
        h.node_sets.resize(h.tree.node_count());
        for (Index v = 0; v < h.tree.node_count(); ++v) {
            if (h.tree.is_leaf(v)) continue;
            h.node_sets[v] = spec.stages[h.tree.node(v).stage - 1];
        }
        const auto z = gen::variable(rng, 6);
        CHECK(nested_on_tree(h, z).value == doctest::Approx(rectangular_nested(spec, z).value).epsilon(1e-9));
    }

    HistoryDependentSpec bad{ScenarioTree::product(std::vector<std::size_t>{2}), {}};
    bad.node_sets.resize(3);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.node_sets[0] = AmbiguitySet::simplex(3);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("induced set sizes and family-1 inclusion") {
    Rng rng(53);
    RectangularSpec spec{{AmbiguitySet::finite_family({gen::probability(rng, 2), gen::probability(rng, 2)}),
                          AmbiguitySet::finite_family(
                              {gen::probability(rng, 2), gen::probability(rng, 2), gen::probability(rng, 2)})}};
    auto r = induced_set(spec);
    CHECK(r.pre_dedup_count == 18);
    CHECK(r.measures.size() <= 18);
    CHECK(r.family_one.size() == 6);
    for (const auto& q : r.family_one) {
        bool found = false;
        for (const auto& m : r.measures) found = found || (m.weights() == q.weights());
        CHECK(found);
    }

    RectangularSpec single{{spec.stages[0], AmbiguitySet::singleton(gen::probability(rng, 2))}};
    auto s = induced_set(single);
    CHECK(s.measures.size() == s.family_one.size());
}

TEST_CASE("singleton marginals give the product expectation") {
    Rng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DiscreteMeasure> laws;
        RectangularSpec spec;
        for (std::size_t t = 0; t < 3; ++t) {
            laws.push_back(gen::probability(rng, rng.between(1, 3), 0.2));
            spec.stages.push_back(AmbiguitySet::singleton(laws.back()));
        }
        const auto z = gen::variable(rng, spec.scenario_count());
        CHECK(rectangular_nested(spec, z).value == doctest::Approx(expectation(z, product_measure(laws))));
        CHECK(static_rectangular(spec, z).value == doctest::Approx(expectation(z, product_measure(laws))));
    }
}

TEST_CASE("convex second stage under a mean constraint closes the gap") {
    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n1 = rng.between(2, 3), n2 = rng.between(3, 5);
        std::vector<double> x(n2);
        for (Index i = 0; i < n2; ++i) x[i] = double(i) + rng.uniform(0, 0.5);
        const double mean = rng.uniform(x.front() + 0.1, x.back() - 0.1);
        auto moment = AmbiguitySet::moment(FiniteSpace(n2), {RandomVariable(x)}, {mean});
        RectangularSpec spec{{gen::ambiguity_set(rng, AmbiguityKind::FiniteFamily, n1), moment}};
        std::vector<double> z;
        for (Index a = 0; a < n1; ++a) {
            const double c0 = rng.uniform(-2, 2), c1 = rng.uniform(-2, 2), c2 = rng.uniform(0, 1);
            for (Index b = 0; b < n2; ++b) z.push_back(c0 + c1 * x[b] + c2 * x[b] * x[b]);
        }
        const RandomVariable zz(z);
        CHECK(std::abs(static_rectangular(spec, zz).value - rectangular_nested(spec, zz).value) <= 1e-9);
    }
}
