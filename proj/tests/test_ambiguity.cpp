#include "doctest.h"

#include <cmath>
#include <vector>

#include "drmo/ambiguity.hpp"
#include "drmo/avar.hpp"
#include "drmo/error.hpp"
#include "drmo/random.hpp"
#include "oracles.hpp"

using namespace drmo;

namespace {

const std::vector<double> kGrid{0.0, 0.5, 1.0};

AmbiguitySet mean_set(double mean) {
    return AmbiguitySet::moment(FiniteSpace(3, {}, Metric::line(kGrid)), {RandomVariable(kGrid)}, {mean});
}

// The set as an explicit polytope in q-space (or transport-plan space).
oracle::Polytope as_polytope(const AmbiguitySet& m) {
    const auto& sys = m.polytope().system;
    oracle::Polytope p;
    p.dim = sys.variable_count();
    for (const auto& c : sys.constraints()) {
        if (c.sense == lp::Sense::Equal) {
            p.eq.push_back(c.coefficients);
            p.eq_rhs.push_back(c.rhs);
        } else {
            auto row = c.coefficients;
            double rhs = c.rhs;
            if (c.sense == lp::Sense::GreaterEqual) {
                for (auto& x : row) x = -x;
                rhs = -rhs;
            }
            p.le.push_back(row);
            p.le_rhs.push_back(rhs);
        }
    }
    for (Index j = 0; j < p.dim; ++j)
        if (std::isfinite(sys.upper()[j])) {
            std::vector<double> row(p.dim, 0.0);
            row[j] = 1.0;
            p.le.push_back(row);
            p.le_rhs.push_back(sys.upper()[j]);
        }
    return p;
}

double vertex_max(const AmbiguitySet& m, const RandomVariable& z) {
    const auto& poly = m.polytope();
    const auto c = poly.pull_back(z.values());
    double best = -1e300;
    for (const auto& v : as_polytope(m).vertices()) best = std::max(best, oracle::dot(c, v));
    return best;
}

}  // namespace

TEST_CASE("robust expectation examples") {
    auto ff = AmbiguitySet::finite_family({DiscreteMeasure({1, 0}), DiscreteMeasure({0, 1})});
    auto r = robust_expectation(ff, RandomVariable({3, 5}));
    CHECK(r.value == 5);
    CHECK(r.argmax == DiscreteMeasure({0, 1}));

    FiniteSpace two(2, {}, Metric({{0, 1}, {1, 0}}));
    auto ball = AmbiguitySet::wasserstein(DiscreteMeasure::dirac(2, 0), 0.0, two);
    CHECK(robust_expectation(ball, RandomVariable({1, 9})).value == doctest::Approx(1.0));

    auto mean = mean_set(0.3);
    auto m = robust_expectation(mean, RandomVariable({0.0, 0.25, 1.0}));
    CHECK(m.value == doctest::Approx(0.3));
    CHECK(m.argmax[0] == doctest::Approx(0.7));
    CHECK(m.argmax[1] == doctest::Approx(0.0));
    CHECK(m.argmax[2] == doctest::Approx(0.3));
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(AmbiguitySet::finite_family({}), ValidationError);
    CHECK_THROWS_AS(AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.4})}), ValidationError);
    CHECK_THROWS_AS(AmbiguitySet::avar(1.0, DiscreteMeasure::uniform(2)), ValidationError);
    CHECK_THROWS_AS(mean_set(1.5), ValidationError);
    CHECK_THROWS_AS(AmbiguitySet::wasserstein(DiscreteMeasure::uniform(2), 0.1, FiniteSpace(2)), ValidationError);
    CHECK_THROWS_AS(AmbiguitySet::wasserstein(DiscreteMeasure::uniform(2), -0.1,
                                              FiniteSpace(2, {}, Metric({{0, 1}, {1, 0}}))),
                    ValidationError);
}

TEST_CASE("closed forms and the polytope LP agree with vertex enumeration") {
    Rng rng(31);
    for (auto kind : {AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment,
                      AmbiguityKind::Wasserstein}) {
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = kind == AmbiguityKind::Wasserstein ? rng.between(2, 3) : rng.between(2, 5);
            auto m = gen::ambiguity_set(rng, kind, n);
            auto z = gen::variable(rng, n);
            auto fast = robust_expectation(m, z);
            auto slow = robust_expectation_lp(m, z);
            CHECK(std::abs(fast.value - slow.value) <= 1e-7);
            CHECK(std::abs(fast.value - vertex_max(m, z)) <= 1e-7);
            CHECK(std::abs(expectation(z, fast.argmax) - fast.value) <= 1e-7);
            CHECK(contains(m, fast.argmax));
        }
    }
}

TEST_CASE("moment maximizers are sparse and match the dual") {
    Rng rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = rng.between(2, 8);
        auto m = gen::ambiguity_set(rng, AmbiguityKind::Moment, n);
        const auto& set = m.as<MomentSet>();
        auto z = gen::variable(rng, n);
        auto r = robust_expectation(m, z);
        CHECK(r.argmax.support(1e-12).size() <= set.psi.size() + 1);
        CHECK(std::abs(moment_dual_value(set, z) - r.value) <= 1e-7);
    }
}

TEST_CASE("reference measure examples") {
    auto a = reference_measure(
        AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.5, 0}), DiscreteMeasure({0, 0.5, 0.5})}));
    CHECK(a.mu == DiscreteMeasure({0.5, 0.5, 0.5}));
    for (Index i = 0; i < 3; ++i) CHECK(a.normalized[i] == doctest::Approx(1.0 / 3));

    const DiscreteMeasure p({0.2, 0.3, 0.5});
    auto b = reference_measure(AmbiguitySet::singleton(p));
    CHECK(b.mu == p);
    CHECK(b.normalized == p);

    auto c = reference_measure(AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(4)));
    CHECK(c.mu == DiscreteMeasure({0.5, 0.5, 0.5, 0.5}));
    CHECK(c.mu.total() == doctest::Approx(2.0));
    CHECK(c.normalized == DiscreteMeasure::uniform(4));
}

TEST_CASE("reference measure dominates and is attained") {
    Rng rng(33);
    std::vector<AmbiguitySet> sets{
        AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.5, 0}), DiscreteMeasure({0, 0.5, 0.5})}),
        AmbiguitySet::singleton(DiscreteMeasure({0.2, 0.3, 0.5})),
        AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(4))};
    for (auto kind : {AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment,
                      AmbiguityKind::Wasserstein})
        sets.push_back(gen::ambiguity_set(rng, kind, 4));
    for (const auto& m : sets) {
        auto r = reference_measure(m);
        CHECK(dominates_all(r, m, 1000, rng));
        CHECK(r.normalized.is_probability());
        for (Index i = 0; i < m.space_size(); ++i) {
            CHECK(contains(m, r.attained_by[i]));
            CHECK(std::abs(r.attained_by[i][i] - r.mu[i]) <= 1e-9);
        }
    }
}

TEST_CASE("dominance fails for a measure that is too small") {
    Rng rng(34);
    auto m = AmbiguitySet::simplex(3);
    ReferenceMeasureResult shrunk{DiscreteMeasure({0.5, 0.5, 0.5}), DiscreteMeasure::uniform(3), {}};
    CHECK_FALSE(dominates_all(shrunk, m, 1000, rng));
}

TEST_CASE("strict monotonicity examples") {
    auto a = is_strictly_monotone(AmbiguitySet::finite_family({DiscreteMeasure({0.5, 0.5}), DiscreteMeasure({0.9, 0.1})}),
                                  DiscreteMeasure::uniform(2));
    CHECK(a.strict);
    CHECK(a.epsilon == doctest::Approx(0.1));
    CHECK(a.outcome == 1);
    CHECK(a.attained_by == DiscreteMeasure({0.9, 0.1}));

    auto b = is_strictly_monotone(AmbiguitySet::finite_family({DiscreteMeasure({1, 0}), DiscreteMeasure({0, 1})}),
                                  DiscreteMeasure::uniform(2));
    CHECK_FALSE(b.strict);
    CHECK(b.epsilon == 0.0);
    CHECK(b.outcome == 0);
    CHECK(b.attained_by == DiscreteMeasure({0, 1}));

    // Mean-constrained measures on three points can drop the middle point.
    auto c = is_strictly_monotone(mean_set(0.3), DiscreteMeasure::uniform(3));
    CHECK_FALSE(c.strict);
    CHECK(c.attained_by[c.outcome] <= 1e-9);
}

TEST_CASE("vertex enumeration") {
    auto avar = AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(4));
    auto v = enumerate_vertices(avar);
    REQUIRE(v);
    CHECK(v->size() == 6);  // two outcomes at the cap 0.5

    Rng rng(35);
    for (int trial = 0; trial < 60; ++trial) {
        auto kind = trial % 2 ? AmbiguityKind::Avar : AmbiguityKind::Moment;
        auto m = gen::ambiguity_set(rng, kind, rng.between(2, 5));
        auto verts = enumerate_vertices(m);
        REQUIRE(verts);
        const auto oracle_verts = as_polytope(m).vertices();
        std::vector<DiscreteMeasure> dedup;
        for (const auto& q : oracle_verts) {
            bool seen = false;
            for (const auto& r : dedup) {
                double d = 0;
                for (Index i = 0; i < q.size(); ++i) d = std::max(d, std::abs(q[i] - r[i]));
                seen = seen || d <= 1e-9;
            }
            if (!seen) dedup.emplace_back(std::vector<double>(q.begin(), q.end()));
        }
        CHECK(verts->size() == dedup.size());
        for (const auto& q : *verts) CHECK(contains(m, q));
    }
    CHECK_FALSE(enumerate_vertices(gen::ambiguity_set(rng, AmbiguityKind::Wasserstein, 3)));
}

TEST_CASE("intersected balls") {
    FiniteSpace line(3, {}, Metric::line(kGrid));
    auto both = AmbiguitySet::wasserstein_intersection(
        line, {Ball{DiscreteMeasure::dirac(3, 0), 0.5}, Ball{DiscreteMeasure::dirac(3, 2), 0.5}});
    auto r = robust_expectation(both, RandomVariable({0, 1, 0}));
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(contains(both, DiscreteMeasure::dirac(3, 1)));
    CHECK_FALSE(contains(both, DiscreteMeasure::dirac(3, 0)));
    CHECK_THROWS_AS(AmbiguitySet::wasserstein_intersection(
                        line, {Ball{DiscreteMeasure::dirac(3, 0), 0.1}, Ball{DiscreteMeasure::dirac(3, 2), 0.1}}),
                    ValidationError);
}
