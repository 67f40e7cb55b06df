#include "doctest.h"

#include <cmath>
#include <vector>

#include "drmo/ambiguity.hpp"
#include "drmo/avar.hpp"
#include "drmo/axioms.hpp"
#include "drmo/error.hpp"
#include "drmo/random.hpp"
#include "oracles.hpp"

using namespace drmo;

TEST_CASE("AVaR examples") {
    const RandomVariable z({1, 2, 3, 4});
    const auto p = DiscreteMeasure::uniform(4);
    auto half = avar_primal({0.5, p}, z);
    CHECK(half.value == doctest::Approx(3.5));
    CHECK(half.tau == 2.0);
    CHECK(avar_primal({0.0, p}, z).value == doctest::Approx(2.5));
    CHECK(avar_primal({0.8, p}, z).value == doctest::Approx(4.0));
    CHECK(avar_dual({0.5, p}, z) == doctest::Approx(3.5));
    CHECK(avar_dual({0.0, p}, z) == doctest::Approx(2.5));
    CHECK(avar_dual({0.8, p}, z) == doctest::Approx(4.0));
}

TEST_CASE("AVaR at level one is the max over charged outcomes") {
    const RandomVariable z({9, 2, 3, 4});
    const DiscreteMeasure p({0.0, 0.5, 0.25, 0.25});
    auto r = avar_primal({1.0, p}, z);
    CHECK(r.value == 4.0);
    CHECK_THROWS_AS(avar_dual({1.0, p}, z), PreconditionError);
    CHECK_THROWS_AS(avar_primal({1.5, p}, z), ValidationError);
}

TEST_CASE("primal, dual and oracles agree on random instances") {
    Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = rng.between(1, 20);
        const double alpha = rng.coin(0.1) ? 0.0 : rng.uniform(0.0, 0.99);
        const auto p = gen::probability(rng, n, 0.2);
        const auto z = gen::variable(rng, n);
        const AvarSpec spec{alpha, p};
        const double primal = avar_primal(spec, z).value;
        CHECK(std::abs(primal - avar_dual(spec, z)) <= 1e-7);
        CHECK(std::abs(primal - oracle::avar_greedy(alpha, p.weights(), z.values())) <= 1e-9);
        CHECK(std::abs(primal - oracle::avar_tau_grid(alpha, p.weights(), z.values())) <= 1e-9);
        CHECK(std::abs(expectation(z, avar_maximizer(spec, z)) - primal) <= 1e-9);
    }
}

TEST_CASE("AVaR is nondecreasing in the level and spans mean to max") {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.between(1, 10);
        const auto p = gen::probability(rng, n, 0.2);
        const auto z = gen::variable(rng, n);
        double prev = avar_primal({0.0, p}, z).value;
        CHECK(std::abs(prev - expectation(z, p)) <= 1e-9);
        for (int k = 1; k <= 20; ++k) {
            const double v = avar_primal({k / 20.0, p}, z).value;
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
        double top = kNegInf;
        for (Index i = 0; i < n; ++i)
            if (p[i] > 0) top = std::max(top, z[i]);
        CHECK(prev == top);
    }
}

TEST_CASE("axiom batteries") {
    Rng rng(23);
    auto avar = check_axioms(AmbiguitySet::avar(0.5, DiscreteMeasure::uniform(4)), 500, rng);
    CHECK(avar.trials == 500);
    CHECK(avar.passed());

    // A single measure gives a linear functional: subadditivity is tight.
    auto single = check_axioms(AmbiguitySet::singleton(DiscreteMeasure({0.2, 0.3, 0.5})), 200, rng);
    CHECK(single.passed());
    CHECK(std::abs(single.subadditivity) <= 1e-12);

    FiniteSpace line(3, {}, Metric({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
    auto pinned = check_axioms(AmbiguitySet::wasserstein(DiscreteMeasure({0.2, 0.3, 0.5}), 0.0, line), 200, rng);
    CHECK(pinned.passed());

    for (auto kind : {AmbiguityKind::FiniteFamily, AmbiguityKind::Avar, AmbiguityKind::Moment,
                      AmbiguityKind::Wasserstein}) {
        for (int k = 0; k < 5; ++k) {
            auto m = gen::ambiguity_set(rng, kind, rng.between(2, 5));
            CHECK_MESSAGE(check_axioms(m, 40, rng).passed(), to_string(kind));
        }
    }
}
