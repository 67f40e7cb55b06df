#include "doctest.h"

#include <cmath>
#include <vector>

#include "drmo/lp.hpp"
#include "drmo/rng.hpp"
#include "oracles.hpp"

using namespace drmo;
using namespace drmo::lp;

TEST_CASE("solve examples") {
    LinearProgram a(1, Direction::Maximize);
    a.set_objective({1});
    a.add_constraint({1}, Sense::LessEqual, 3);
    auto sa = solve(a);
    REQUIRE(sa.status == Status::Optimal);
    CHECK(sa.value == doctest::Approx(3));
    CHECK(sa.dual[0] == doctest::Approx(1));

    LinearProgram b(2, Direction::Maximize);
    b.set_objective({1, 1});
    b.add_constraint({1, 1}, Sense::LessEqual, 1);
    auto sb = solve(b);
    REQUIRE(sb.status == Status::Optimal);
    CHECK(sb.value == doctest::Approx(1));

    LinearProgram c(1);
    c.set_bounds(0, kNegInf, 0);
    c.add_constraint({1}, Sense::Equal, 1);
    CHECK(solve(c).status == Status::Infeasible);

    LinearProgram d(1, Direction::Maximize);
    d.set_objective({1});
    CHECK(solve(d).status == Status::Unbounded);
}

TEST_CASE("bounds, free variables and shadow prices") {
    // min |x - 2| style: min t s.t. t >= x - 2, t >= 2 - x, x free, 3 <= x <= 5
    LinearProgram p(2);
    p.set_objective({0, 1});
    p.set_bounds(0, 3, 5);
    p.set_bounds(1, kNegInf, kInf);
    p.add_constraint({-1, 1}, Sense::GreaterEqual, -2);
    p.add_constraint({1, 1}, Sense::GreaterEqual, 2);
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.value == doctest::Approx(1));
    CHECK(s.primal[0] == doctest::Approx(3));
    auto cert = certify(p, s);
    CHECK(cert.primal_infeasibility <= 1e-9);
    CHECK(cert.dual_infeasibility <= 1e-9);
    CHECK(cert.duality_gap <= 1e-9);
    CHECK(cert.complementary_slackness <= 1e-9);

    // Upper-bounded only variable and a negative right-hand side.
    LinearProgram q(1, Direction::Maximize);
    q.set_objective({-1});
    q.set_bounds(0, kNegInf, 4);
    q.add_constraint({-1}, Sense::LessEqual, -1.5);
    auto sq = solve(q);
    REQUIRE(sq.status == Status::Optimal);
    CHECK(sq.value == doctest::Approx(-1.5));
    CHECK(sq.dual[0] == doctest::Approx(1));
    CHECK(certify(q, sq).duality_gap <= 1e-9);
}

TEST_CASE("degenerate redundant equalities") {
    LinearProgram p(3, Direction::Maximize);
    p.set_objective({1, 2, 3});
    p.add_constraint({1, 1, 1}, Sense::Equal, 1);
    p.add_constraint({2, 2, 2}, Sense::Equal, 2);
    p.add_constraint({0, 0, 1}, Sense::LessEqual, 0.25);
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.value == doctest::Approx(0.75 * 2 + 0.25 * 3));
    auto c = certify(p, s);
    CHECK(c.duality_gap <= 1e-9);
    CHECK(c.dual_infeasibility <= 1e-9);
}

TEST_CASE("random LPs match vertex enumeration and certify") {
    Rng rng(11);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng.between(2, 4), m = rng.between(1, 4);
        oracle::Polytope poly;
        poly.dim = n;
        LinearProgram p(n, rng.coin() ? Direction::Maximize : Direction::Minimize);
        std::vector<double> c(n);
        for (auto& x : c) x = rng.uniform(-3, 3);
        p.set_objective(c);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> a(n);
            for (auto& x : a) x = rng.uniform(0.1, 2.0);
            const double b = rng.uniform(0.5, 3.0);
            p.add_constraint(a, Sense::LessEqual, b);
            poly.le.push_back(a);
            poly.le_rhs.push_back(b);
        }
        if (rng.coin(0.4)) {
            std::vector<double> a(n);
            for (auto& x : a) x = rng.uniform(0.0, 1.0);
            const double b = rng.uniform(0.0, 0.3);
            p.add_constraint(a, Sense::Equal, b);
            poly.eq.push_back(a);
            poly.eq_rhs.push_back(b);
        }
        auto verts = poly.vertices();
        auto s = solve(p);
        if (verts.empty()) {
            CHECK(s.status == Status::Infeasible);
            continue;
        }
        REQUIRE(s.status == Status::Optimal);
        double best = p.direction() == Direction::Maximize ? -1e300 : 1e300;
        for (const auto& v : verts) {
            const double val = oracle::dot(c, v);
            best = p.direction() == Direction::Maximize ? std::max(best, val) : std::min(best, val);
        }
        CHECK(std::abs(s.value - best) <= 1e-7);
        auto cert = certify(p, s);
        CHECK(cert.primal_infeasibility <= 1e-7);
        CHECK(cert.dual_infeasibility <= 1e-7);
        CHECK(cert.duality_gap <= 1e-7);
        CHECK(cert.complementary_slackness <= 1e-7);
        ++checked;
    }
    CHECK(checked > 200);
}

TEST_CASE("re-solving is bit-for-bit deterministic") {
    LinearProgram p(3, Direction::Maximize);
    p.set_objective({0.3, 0.7, 0.1});
    p.add_constraint({1, 1, 1}, Sense::Equal, 1);
    p.add_constraint({0.2, 0.9, 0.4}, Sense::LessEqual, 0.5);
    auto a = solve(p), b = solve(p);
    CHECK(a.value == b.value);
    CHECK(a.primal == b.primal);
    CHECK(a.dual == b.dual);
}

TEST_CASE("linear-fractional examples") {
    LinearProgram box(1);
    box.set_bounds(0, 0, 2);
    auto a = solve_linear_fractional({{1}, 0}, {{0}, 1}, box);
    REQUIRE(a.status == FractionalStatus::Optimal);
    CHECK(a.value == doctest::Approx(2));
    CHECK(a.argmax[0] == doctest::Approx(2));

    LinearProgram simplex(2);
    simplex.add_constraint({1, 1}, Sense::Equal, 1);
    auto b = solve_linear_fractional({{1, 2}, 0}, {{1, 1}, 0}, simplex);
    REQUIRE(b.status == FractionalStatus::Optimal);
    CHECK(b.value == doctest::Approx(2));
    CHECK(b.argmax[0] == doctest::Approx(0).epsilon(1e-12));
    CHECK(b.argmax[1] == doctest::Approx(1));

    // Denominator x1 forced to zero: unreachable.
    LinearProgram pinned(2);
    pinned.add_constraint({1, 1}, Sense::Equal, 1);
    pinned.add_constraint({1, 0}, Sense::Equal, 0);
    auto c = solve_linear_fractional({{1, 0}, 0}, {{1, 0}, 0}, pinned);
    CHECK(c.status == FractionalStatus::Unreachable);
    CHECK(c.value == kNegInf);

    // Nonzero lower bounds go through the homogenized bound rows.
    LinearProgram shifted(1);
    shifted.set_bounds(0, 1, 3);
    auto d = solve_linear_fractional({{0}, 1}, {{1}, 0}, shifted);
    REQUIRE(d.status == FractionalStatus::Optimal);
    CHECK(d.value == doctest::Approx(1.0));
    CHECK(d.argmax[0] == doctest::Approx(1.0));
}

TEST_CASE("random linear-fractional programs match the vertex maximum") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3;
        oracle::Polytope poly;
        poly.dim = n;
        LinearProgram p(n);
        for (std::size_t i = 0; i < 2; ++i) {
            std::vector<double> a(n);
            for (auto& x : a) x = rng.uniform(0.1, 2.0);
            const double b = rng.uniform(0.5, 3.0);
            p.add_constraint(a, Sense::LessEqual, b);
            poly.le.push_back(a);
            poly.le_rhs.push_back(b);
        }
        AffineForm num, den;
        num.coefficients.resize(n);
        den.coefficients.resize(n);
        for (auto& x : num.coefficients) x = rng.uniform(-2, 2);
        for (auto& x : den.coefficients) x = rng.uniform(0.1, 2);
        num.constant = rng.uniform(-1, 1);
        den.constant = rng.uniform(0.1, 1);
        double best = -1e300;
        for (const auto& v : poly.vertices()) best = std::max(best, num(v) / den(v));
        auto r = solve_linear_fractional(num, den, p);
        REQUIRE(r.status == FractionalStatus::Optimal);
        CHECK(std::abs(r.value - best) <= 1e-7);
        CHECK(std::abs(num(r.argmax) / den(r.argmax) - r.value) <= 1e-7);
    }
}
