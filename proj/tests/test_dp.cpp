#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "drmo/dp.hpp"
#include "drmo/error.hpp"
#include "drmo/random.hpp"

using namespace drmo;

namespace {

// Two stages: a fixed first action, then two actions after each of two outcomes.
MultistageProblem two_by_two(const std::vector<std::vector<double>>& second, AmbiguitySet set) {
    MultistageProblem p;
    p.outcomes = {1, 2};
    p.actions = {1, 2};
    p.cost = {{{0.0}}, second};
    p.allowed = {{{{0}}}, {{{0, 1}, {0, 1}}}};
    p.sets = {std::nullopt, std::move(set)};
    return p;
}

// Expectation of the policy cost under the product of the singleton laws.
double product_expectation(const MultistageProblem& p, const Policy& pi) {
    const auto z = policy_cost(p, pi);
    double total = 0.0;
    for (Index s = 0; s < z.size(); ++s) {
        double w = 1.0;
        Index rest = s;
        for (std::size_t t = p.stage_count(); t-- > 1;) {
            w *= p.sets[t]->as<FiniteFamily>().members[0][rest % p.outcomes[t]];
            rest /= p.outcomes[t];
        }
        total += w * z[s];
    }
    return total;
}

MultistageProblem with_singletons(Rng& rng, MultistageProblem p) {
    for (std::size_t t = 1; t < p.stage_count(); ++t)
        p.sets[t] = AmbiguitySet::singleton(gen::probability(rng, p.outcomes[t], 0.2));
    return p;
}

}  // namespace

TEST_CASE("deterministic single stage") {
    MultistageProblem p;
    p.outcomes = {1};
    p.actions = {3};
    p.cost = {{{4.0}, {1.5}, {2.0}}};
    p.allowed = {{{{0, 1, 2}}}};
    p.sets = {std::nullopt};
    auto s = solve_dp(p);
    CHECK(s.value == 1.5);
    CHECK(s.policy.actions[0][0] == 1);
    CHECK(policy_count(p) == 3);
}

TEST_CASE("full simplex stage takes the worst child") {
    const std::vector<std::vector<double>> c{{3, 1}, {2, 4}};
    auto p = two_by_two(c, AmbiguitySet::simplex(2));
    // Each outcome gets its own action: min over the 4 policies of the max
    // over the 2 scenarios.
    double oracle = kInf;
    for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b) oracle = std::min(oracle, std::max(c[a][0], c[b][1]));
    auto s = solve_dp(p);
    CHECK(s.value == oracle);
    CHECK(s.value == 2);
    CHECK(s.policy.actions[1] == std::vector<Index>{1, 0});
    CHECK(policy_count(p) == 4);
    CHECK(bellman_residual(p, s.values) <= 1e-12);
}

TEST_CASE("ties go to the smallest action") {
    auto p = two_by_two({{1, 1}, {1, 1}}, AmbiguitySet::simplex(2));
    auto s = solve_dp(p);
    CHECK(s.policy.actions[1] == std::vector<Index>{0, 0});
}

TEST_CASE("singleton sets reduce to risk-neutral expectation") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = with_singletons(rng, gen::multistage_problem(rng, {3, 3, 3, false}, 500));
        double best = kInf;
        for_each_policy(p, [&](const Policy& pi) { best = std::min(best, product_expectation(p, pi)); });
        auto s = solve_dp(p);
        CHECK(std::abs(s.value - best) <= 1e-9);
        CHECK(std::abs(static_policy_value(p, s.policy) - s.value) <= 1e-9);
    }
}

TEST_CASE("constant costs ignore the ambiguity") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = gen::multistage_problem(rng, {3, 3, 2, false});
        double total = 0.0;
        for (std::size_t t = 0; t < p.stage_count(); ++t) {
            const double c = rng.uniform(0, 3);
            total += c;
            for (auto& row : p.cost[t]) std::fill(row.begin(), row.end(), c);
        }
        CHECK(solve_dp(p).value == doctest::Approx(total));
        for_each_policy(p, [&](const Policy& pi) { CHECK(nested_policy_value(p, pi) == doctest::Approx(total)); });
    }
}

TEST_CASE("dynamic programming agrees with policy enumeration") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = gen::multistage_problem(rng, {3, 3, 3, false});
        auto s = solve_dp(p);
        CHECK(bellman_residual(p, s.values) <= 1e-9);
        CHECK(std::abs(nested_policy_value(p, s.policy) - s.value) <= 1e-9);
        auto cmp = compare_min_static_vs_min_nested(p);
        CHECK(cmp.policies == static_cast<std::size_t>(policy_count(p)));
        CHECK(cmp.dp_matches);
        CHECK(cmp.inequality_holds);
        auto wd = weak_duality_check(p);
        CHECK(wd.holds);
        CHECK(wd.min_max == doctest::Approx(cmp.min_static));
    }
}

TEST_CASE("history-dependent worst case separates the two minima") {
    const auto p = witness_problem();
    auto cmp = compare_min_static_vs_min_nested(p);
    CHECK(cmp.policies == 9);
    CHECK(cmp.min_static == doctest::Approx(0.55));
    CHECK(cmp.min_nested == doctest::Approx(1.0));
    CHECK(cmp.dp_value == doctest::Approx(1.0));
    CHECK(cmp.argmins_differ);
    CHECK(cmp.nested_argmin.actions[1] == std::vector<Index>{2, 2});
    CHECK(cmp.static_argmin.actions[1] == std::vector<Index>{0, 1});
    CHECK(static_policy_value(p, cmp.static_argmin) < nested_policy_value(p, cmp.static_argmin) - 1e-3);
}

TEST_CASE("optimality conditions are necessary under strict monotonicity") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = gen::multistage_problem(rng, {3, 3, 3, true});
        auto r = verify_optimality_necessity(p);
        CHECK_FALSE(r.skipped);
        CHECK(r.sufficiency_holds);
        CHECK(r.optimal_policies >= 1);
        CHECK(r.violations == 0);
    }

    auto simplex = two_by_two({{3, 1}, {2, 4}}, AmbiguitySet::simplex(2));
    auto skipped = verify_optimality_necessity(simplex);
    CHECK(skipped.skipped);
    CHECK(skipped.sufficiency_holds);
    CHECK_FALSE(skipped.note.empty());

    auto classical = two_by_two({{3, 1}, {2, 4}}, AmbiguitySet::singleton(DiscreteMeasure({0.3, 0.7})));
    auto c = verify_optimality_necessity(classical);
    CHECK_FALSE(c.skipped);
    CHECK(c.optimal_policies == 1);
    CHECK(c.violations == 0);
}

TEST_CASE("input and policy validation") {
    auto p = two_by_two({{3, 1}, {2, 4}}, AmbiguitySet::simplex(2));
    auto broken = p;
    broken.allowed[1][0][1].clear();
    CHECK_THROWS_AS(solve_dp(broken), ValidationError);
    broken = p;
    broken.outcomes[0] = 2;
    CHECK_THROWS_AS(broken.validate(), ValidationError);
    broken = p;
    broken.sets[1] = AmbiguitySet::simplex(3);
    CHECK_THROWS_AS(broken.validate(), ValidationError);

    Policy bad{{{0}, {0, 2}}};
    CHECK_THROWS_AS(nested_policy_value(p, bad), ValidationError);

    // 3 actions per node over 13 nodes is far beyond a tiny cap.
    MultistageProblem wide;
    wide.outcomes = {1, 3, 3};
    wide.actions = {3, 3, 3};
    wide.cost.assign(3, {});
    for (std::size_t t = 0; t < 3; ++t) wide.cost[t].assign(3, std::vector<double>(wide.outcomes[t], 1.0));
    wide.allowed = {{{{0, 1, 2}}}, {}, {}};
    for (std::size_t t = 1; t < 3; ++t)
        wide.allowed[t].assign(3, std::vector<std::vector<Index>>(3, {0, 1, 2}));
    wide.sets = {std::nullopt, AmbiguitySet::simplex(3), AmbiguitySet::simplex(3)};
    CHECK(policy_count(wide) == std::pow(3.0, 13));
    CHECK_THROWS_AS(compare_min_static_vs_min_nested(wide), CapExceededError);
}
