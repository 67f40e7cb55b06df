#include "drmo/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "drmo/avar.hpp"
#include "drmo/error.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
    for (Index i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

void push_unique(std::vector<DiscreteMeasure>& out, DiscreteMeasure q) {
    for (const auto& r : out)
        if (same_measure(r, q, tol::kDedup)) return;
    out.push_back(std::move(q));
}

std::vector<double> unit(std::size_t n, Index i, double value = 1.0) {
    std::vector<double> e(n, 0.0);
    e[i] = value;
    return e;
}

// Least squares min |A w - b| for a tall A (rows >= cols) by Householder QR in
// extended precision; nullopt when A is numerically rank deficient.
std::optional<std::vector<double>> least_squares(const std::vector<std::vector<double>>& cols,
                                                 const std::vector<double>& b) {
    using Real = long double;
    const std::size_t k = cols.size();
    const std::size_t m = b.size();
    std::vector<std::vector<Real>> a(k, std::vector<Real>(m));
    Real scale = 0;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < m; ++r) {
            a[j][r] = cols[j][r];
            scale = std::max(scale, std::abs(a[j][r]));
        }
    std::vector<Real> y(b.begin(), b.end());
    for (std::size_t j = 0; j < k; ++j) {
        Real norm = 0;
        for (std::size_t r = j; r < m; ++r) norm += a[j][r] * a[j][r];
        norm = std::sqrt(norm);
        if (norm <= 1e-11L * std::max(scale, Real(1))) return std::nullopt;
        const Real alpha = a[j][j] > 0 ? -norm : norm;
        std::vector<Real> v(a[j].begin() + static_cast<std::ptrdiff_t>(j), a[j].end());
        v[0] -= alpha;
        Real vv = 0;
        for (Real x : v) vv += x * x;
        auto reflect = [&](std::vector<Real>& col) {
            Real d = 0;
            for (std::size_t r = j; r < m; ++r) d += v[r - j] * col[r];
            d = 2 * d / vv;
            for (std::size_t r = j; r < m; ++r) col[r] -= d * v[r - j];
        };
        for (std::size_t c = j; c < k; ++c) reflect(a[c]);
        reflect(y);
    }
    std::vector<double> w(k);
    std::vector<Real> x(k);
    for (std::size_t i = k; i-- > 0;) {
        Real s = y[i];
        for (std::size_t c = i + 1; c < k; ++c) s -= a[c][i] * x[c];
        x[i] = s / a[i][i];
        w[i] = static_cast<double>(x[i]);
    }
    return w;
}

MeasurePolytope family_polytope(const FiniteFamily& f, std::size_t n) {
    const std::size_t m = f.members.size();
    MeasurePolytope poly;
    poly.system = lp::LinearProgram(m);
    poly.system.add_constraint(std::vector<double>(m, 1.0), lp::Sense::Equal, 1.0);
    poly.map.assign(n, std::vector<double>(m, 0.0));
    for (Index k = 0; k < m; ++k)
        for (Index i = 0; i < n; ++i) poly.map[i][k] = f.members[k][i];
    return poly;
}

MeasurePolytope identity_polytope(std::size_t n) {
    MeasurePolytope poly;
    poly.system = lp::LinearProgram(n);
    poly.system.add_constraint(std::vector<double>(n, 1.0), lp::Sense::Equal, 1.0);
    poly.map.assign(n, std::vector<double>(n, 0.0));
    for (Index i = 0; i < n; ++i) poly.map[i][i] = 1.0;
    return poly;
}

MeasurePolytope avar_polytope(const AvarSet& s) {
    auto poly = identity_polytope(s.reference.size());
    for (Index i = 0; i < s.reference.size(); ++i)
        poly.system.set_bounds(i, 0.0, s.reference[i] / (1.0 - s.alpha));
    return poly;
}

MeasurePolytope moment_polytope(const MomentSet& s) {
    auto poly = identity_polytope(s.support.size());
    for (Index k = 0; k < s.psi.size(); ++k)
        poly.system.add_constraint(s.psi[k].values(), lp::Sense::Equal, s.targets[k]);
    return poly;
}

// One transport plan per ball; all plans share the same second marginal q.
MeasurePolytope wasserstein_polytope(const WassersteinBall& w) {
    const std::size_t n = w.space.size();
    const std::size_t per = n * n;
    const std::size_t vars = per * w.balls.size();
    const Metric& d = w.space.metric();
    MeasurePolytope poly;
    poly.system = lp::LinearProgram(vars);
    auto var = [&](std::size_t b, Index i, Index j) { return b * per + i * n + j; };
    for (std::size_t b = 0; b < w.balls.size(); ++b) {
        for (Index i = 0; i < n; ++i) {
            std::vector<double> row(vars, 0.0);
            for (Index j = 0; j < n; ++j) row[var(b, i, j)] = 1.0;
            poly.system.add_constraint(std::move(row), lp::Sense::Equal, w.balls[b].center[i]);
        }
        std::vector<double> cost(vars, 0.0);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) cost[var(b, i, j)] = d(i, j);
        poly.system.add_constraint(std::move(cost), lp::Sense::LessEqual, w.balls[b].radius);
        if (b == 0) continue;
        for (Index j = 0; j < n; ++j) {
            std::vector<double> row(vars, 0.0);
            for (Index i = 0; i < n; ++i) {
                row[var(b, i, j)] = 1.0;
                row[var(0, i, j)] = -1.0;
            }
            poly.system.add_constraint(std::move(row), lp::Sense::Equal, 0.0);
        }
    }
    poly.map.assign(n, std::vector<double>(vars, 0.0));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) poly.map[j][var(0, i, j)] = 1.0;
    return poly;
}

}  // namespace

std::string to_string(AmbiguityKind kind) {
    switch (kind) {
        case AmbiguityKind::FiniteFamily: return "finite_family";
        case AmbiguityKind::Avar: return "avar";
        case AmbiguityKind::Moment: return "moment";
        case AmbiguityKind::Wasserstein: return "wasserstein";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// MeasurePolytope

std::vector<double> MeasurePolytope::pull_back(std::span<const double> c) const {
    std::vector<double> out(variable_count(), 0.0);
    for (Index i = 0; i < map.size(); ++i) {
        if (c[i] == 0.0) continue;
        for (Index k = 0; k < out.size(); ++k) out[k] += c[i] * map[i][k];
    }
    return out;
}

DiscreteMeasure MeasurePolytope::push_forward(const std::vector<double>& v) const {
    std::vector<double> q(map.size(), 0.0);
    for (Index i = 0; i < map.size(); ++i) {
        for (Index k = 0; k < v.size(); ++k) q[i] += map[i][k] * v[k];
        q[i] = std::max(q[i], 0.0);
    }
    return DiscreteMeasure(std::move(q));
}

// ---------------------------------------------------------------------------
// AmbiguitySet

AmbiguitySet::AmbiguitySet(Variant v, std::size_t n) : v_(std::move(v)), n_(n) {
    polytope_ = std::visit(
        [&](const auto& s) -> MeasurePolytope {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FiniteFamily>) return family_polytope(s, n_);
            else if constexpr (std::is_same_v<T, AvarSet>) return avar_polytope(s);
            else if constexpr (std::is_same_v<T, MomentSet>) return moment_polytope(s);
            else return wasserstein_polytope(s);
        },
        v_);
}

AmbiguitySet AmbiguitySet::finite_family(std::vector<DiscreteMeasure> members) {
    require(!members.empty(), "a finite family needs at least one member");
    const std::size_t n = members.front().size();
    for (const auto& q : members) {
        require(q.size() == n, "family members live on different spaces");
        require(q.is_probability(), "family members must be probabilities");
    }
    return AmbiguitySet(FiniteFamily{std::move(members)}, n);
}

AmbiguitySet AmbiguitySet::simplex(std::size_t n) {
    std::vector<DiscreteMeasure> members;
    for (Index i = 0; i < n; ++i) members.push_back(DiscreteMeasure::dirac(n, i));
    return finite_family(std::move(members));
}

AmbiguitySet AmbiguitySet::singleton(DiscreteMeasure p) { return finite_family({std::move(p)}); }

AmbiguitySet AmbiguitySet::avar(double alpha, DiscreteMeasure reference) {
    require(alpha >= 0.0 && alpha < 1.0, "AVaR set level must lie in [0, 1)");
    require(reference.is_probability(), "AVaR set reference must be a probability");
    const std::size_t n = reference.size();
    return AmbiguitySet(AvarSet{alpha, std::move(reference)}, n);
}

AmbiguitySet AmbiguitySet::moment(FiniteSpace support, std::vector<RandomVariable> psi, std::vector<double> targets) {
    require(psi.size() == targets.size(), "one target per moment function");
    for (const auto& f : psi) require(f.size() == support.size(), "moment functions must live on the support");
    for (double b : targets) require(std::isfinite(b), "moment targets must be finite");
    const std::size_t n = support.size();
    AmbiguitySet set(MomentSet{std::move(support), std::move(psi), std::move(targets)}, n);
    if (lp::solve(set.polytope_.system).status != lp::Status::Optimal)
        throw ValidationError("moment set is empty: no probability on the support meets the targets");
    return set;
}

AmbiguitySet AmbiguitySet::wasserstein(DiscreteMeasure center, double radius, FiniteSpace space) {
    return wasserstein_intersection(std::move(space), {Ball{std::move(center), radius}});
}

AmbiguitySet AmbiguitySet::wasserstein_intersection(FiniteSpace space, std::vector<Ball> balls) {
    require(space.has_metric(), "a Wasserstein ball needs a metric space");
    require(!balls.empty(), "at least one ball is needed");
    for (const auto& b : balls) {
        require(b.center.size() == space.size(), "ball center lives on a different space");
        require(b.center.is_probability(), "ball center must be a probability");
        require(std::isfinite(b.radius) && b.radius >= 0.0, "ball radius must be finite and nonnegative");
    }
    const std::size_t n = space.size();
    AmbiguitySet set(WassersteinBall{std::move(space), std::move(balls)}, n);
    if (set.as<WassersteinBall>().balls.size() > 1 && lp::solve(set.polytope_.system).status != lp::Status::Optimal)
        throw ValidationError("the intersection of Wasserstein balls is empty");
    return set;
}

AmbiguityKind AmbiguitySet::kind() const { return static_cast<AmbiguityKind>(v_.index()); }

// ---------------------------------------------------------------------------
// Worst-case expectation

RobustValue robust_expectation_lp(const AmbiguitySet& m, const RandomVariable& z) {
    require(z.size() == m.space_size(), "random variable and ambiguity set live on different spaces");
    require(z.is_finite(), "worst-case expectation requires a finite random variable");
    const auto& poly = m.polytope();
    lp::LinearProgram prog = poly.system;
    prog.set_direction(lp::Direction::Maximize);
    prog.set_objective(poly.pull_back(z.values()));
    const auto s = lp::solve(prog);
    if (s.status != lp::Status::Optimal)
        throw InternalError("worst-case expectation LP ended " + lp::to_string(s.status));
    return {s.value, poly.push_forward(s.primal)};
}

RobustValue robust_expectation(const AmbiguitySet& m, const RandomVariable& z) {
    require(z.size() == m.space_size(), "random variable and ambiguity set live on different spaces");
    require(z.is_finite(), "worst-case expectation requires a finite random variable");
    switch (m.kind()) {
        case AmbiguityKind::FiniteFamily: {
            const auto& members = m.as<FiniteFamily>().members;
            Index best = 0;
            double value = expectation(z, members[0]);
            for (Index k = 1; k < members.size(); ++k) {
                const double v = expectation(z, members[k]);
                if (v > value) {
                    value = v;
                    best = k;
                }
            }
            return {value, members[best]};
        }
        case AmbiguityKind::Avar: {
            const auto& s = m.as<AvarSet>();
            const AvarSpec spec{s.alpha, s.reference};
            return {avar_primal(spec, z).value, avar_maximizer(spec, z)};
        }
        case AmbiguityKind::Moment:
        case AmbiguityKind::Wasserstein: return robust_expectation_lp(m, z);
    }
    throw InternalError("unknown ambiguity kind");
}

// ---------------------------------------------------------------------------
// Reference measure

ReferenceMeasureResult reference_measure(const AmbiguitySet& m) {
    const std::size_t n = m.space_size();
    std::vector<double> mu(n);
    std::vector<DiscreteMeasure> attained;
    for (Index i = 0; i < n; ++i) {
        auto r = robust_expectation(m, RandomVariable(unit(n, i)));
        mu[i] = r.value;
        attained.push_back(std::move(r.argmax));
    }
    if (m.kind() == AmbiguityKind::FiniteFamily) {
        for (Index i = 0; i < n; ++i) {
            mu[i] = 0.0;
            for (const auto& q : m.as<FiniteFamily>().members) mu[i] = std::max(mu[i], q[i]);
        }
    } else if (m.kind() == AmbiguityKind::Avar) {
        const auto& s = m.as<AvarSet>();
        for (Index i = 0; i < n; ++i) mu[i] = std::min(1.0, s.reference[i] / (1.0 - s.alpha));
    }
    for (double& x : mu) x = std::clamp(x, 0.0, 1.0);
    DiscreteMeasure measure(std::move(mu));
    DiscreteMeasure normalized = measure.normalized();
    return {std::move(measure), std::move(normalized), std::move(attained)};
}

DiscreteMeasure sample_member(const AmbiguitySet& m, Rng& rng) {
    const std::size_t n = m.space_size();
    std::vector<DiscreteMeasure> pool;
    const std::size_t k = rng.between(1, 3);
    for (std::size_t t = 0; t < k; ++t) {
        if (m.kind() == AmbiguityKind::FiniteFamily && rng.coin()) {
            const auto& members = m.as<FiniteFamily>().members;
            pool.push_back(members[rng.index(members.size())]);
            continue;
        }
        std::vector<double> c(n);
        for (auto& x : c) x = rng.uniform(-1.0, 1.0);
        pool.push_back(robust_expectation(m, RandomVariable(std::move(c))).argmax);
    }
    std::vector<double> weight(pool.size());
    double total = 0.0;
    for (auto& w : weight) total += (w = rng.uniform(0.05, 1.0));
    std::vector<double> q(n, 0.0);
    for (std::size_t t = 0; t < pool.size(); ++t)
        for (Index i = 0; i < n; ++i) q[i] += weight[t] / total * pool[t][i];
    return DiscreteMeasure(std::move(q));
}

bool dominates_all(const ReferenceMeasureResult& result, const AmbiguitySet& m, std::size_t trials, Rng& rng) {
    const std::size_t n = m.space_size();
    for (std::size_t t = 0; t < trials; ++t) {
        const DiscreteMeasure q = sample_member(m, rng);
        std::vector<Index> a;
        for (Index i = 0; i < n; ++i)
            if (rng.coin()) a.push_back(i);
        if (q.mass(a) > result.mu.mass(a) + tol::kEqual) return false;
    }
    return true;
}

StrictMonotonicity is_strictly_monotone(const AmbiguitySet& m, const DiscreteMeasure& p) {
    require(p.size() == m.space_size(), "reference and ambiguity set live on different spaces");
    require(p.is_probability(), "the reference must be a probability");
    StrictMonotonicity out{false, kInf, 0, DiscreteMeasure{}};
    for (Index i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        auto r = robust_expectation(m, RandomVariable(unit(p.size(), i, -1.0)));
        const double inf_mass = std::max(-r.value, 0.0);
        if (inf_mass < out.epsilon) {
            out.epsilon = inf_mass;
            out.outcome = i;
            out.attained_by = std::move(r.argmax);
        }
    }
    out.strict = out.epsilon > tol::kEqual;
    return out;
}

bool contains(const AmbiguitySet& m, const DiscreteMeasure& q, double tol) {
    require(q.size() == m.space_size(), "measure and ambiguity set live on different spaces");
    if (std::abs(q.total() - 1.0) > tol) return false;
    switch (m.kind()) {
        case AmbiguityKind::Avar: {
            const auto& s = m.as<AvarSet>();
            for (Index i = 0; i < q.size(); ++i)
                if (q[i] > s.reference[i] / (1.0 - s.alpha) + tol) return false;
            return true;
        }
        case AmbiguityKind::Moment: {
            const auto& s = m.as<MomentSet>();
            for (Index k = 0; k < s.psi.size(); ++k) {
                double e = 0.0;
                for (Index i = 0; i < q.size(); ++i) e += q[i] * s.psi[k][i];
                if (std::abs(e - s.targets[k]) > tol) return false;
            }
            return true;
        }
        default: {
            const auto& poly = m.polytope();
            lp::LinearProgram prog = poly.system;
            for (Index i = 0; i < q.size(); ++i) prog.add_constraint(poly.map[i], lp::Sense::Equal, q[i]);
            return lp::solve(prog).status == lp::Status::Optimal;
        }
    }
}

// ---------------------------------------------------------------------------
// Vertex enumeration

std::optional<std::vector<DiscreteMeasure>> enumerate_vertices(const AmbiguitySet& m, std::size_t cap) {
    const std::size_t n = m.space_size();
    switch (m.kind()) {
        case AmbiguityKind::FiniteFamily: return m.as<FiniteFamily>().members;
        case AmbiguityKind::Wasserstein: return std::nullopt;
        case AmbiguityKind::Avar: {
            // Vertices of {0 <= q <= cap, sum q = 1}: a set S at its caps and at
            // most one further coordinate strictly between its bounds.
            const auto& s = m.as<AvarSet>();
            std::vector<Index> live;
            std::vector<double> upper(n);
            for (Index i = 0; i < n; ++i) {
                upper[i] = s.reference[i] / (1.0 - s.alpha);
                if (upper[i] > 0.0) live.push_back(i);
            }
            if (live.size() >= 63 || (std::size_t{1} << live.size()) > cap) return std::nullopt;
            std::vector<DiscreteMeasure> out;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << live.size()); ++mask) {
                double used = 0.0;
                std::vector<double> q(n, 0.0);
                for (std::size_t b = 0; b < live.size(); ++b)
                    if (mask >> b & 1U) {
                        q[live[b]] = upper[live[b]];
                        used += upper[live[b]];
                    }
                const double rest = 1.0 - used;
                if (rest < -tol::kDedup) continue;
                if (rest <= tol::kDedup) {
                    push_unique(out, DiscreteMeasure(q));
                    continue;
                }
                for (std::size_t b = 0; b < live.size(); ++b) {
                    if (mask >> b & 1U || upper[live[b]] <= rest) continue;
                    auto v = q;
                    v[live[b]] = rest;
                    push_unique(out, DiscreteMeasure(std::move(v)));
                }
            }
            return out;
        }
        case AmbiguityKind::Moment: {
            // Basic feasible solutions: linearly independent support columns
            // (1, psi(x)) with a nonnegative solution of the moment equations.
            const auto& s = m.as<MomentSet>();
            const std::size_t rows = s.psi.size() + 1;
            std::vector<std::vector<double>> col(n, std::vector<double>(rows));
            std::vector<double> rhs(rows);
            rhs[0] = 1.0;
            for (Index k = 0; k < s.psi.size(); ++k) rhs[k + 1] = s.targets[k];
            for (Index x = 0; x < n; ++x) {
                col[x][0] = 1.0;
                for (Index k = 0; k < s.psi.size(); ++k) col[x][k + 1] = s.psi[k][x];
            }
            std::vector<DiscreteMeasure> out;
            std::size_t visited = 0;
            bool over = false;
            std::vector<Index> pick;
            std::function<void(Index)> rec = [&](Index start) {
                if (over) return;
                if (!pick.empty()) {
                    if (++visited > cap) {
                        over = true;
                        return;
                    }
                    const std::size_t k = pick.size();
                    std::vector<std::vector<double>> chosen(k);
                    for (std::size_t a = 0; a < k; ++a) chosen[a] = col[pick[a]];
                    if (auto w = least_squares(chosen, rhs)) {
                        bool ok = true;
                        for (double x : *w) ok = ok && x >= -tol::kEqual;
                        for (std::size_t r = 0; r < rows && ok; ++r) {
                            double lhs = 0.0;
                            for (std::size_t a = 0; a < k; ++a) lhs += col[pick[a]][r] * (*w)[a];
                            ok = std::abs(lhs - rhs[r]) <= tol::kEqual;
                        }
                        if (ok) {
                            std::vector<double> q(n, 0.0);
                            for (std::size_t a = 0; a < k; ++a) q[pick[a]] = std::max((*w)[a], 0.0);
                            push_unique(out, DiscreteMeasure(std::move(q)));
                        }
                    }
                }
                if (pick.size() == rows) return;
                for (Index x = start; x < n; ++x) {
                    pick.push_back(x);
                    rec(x + 1);
                    pick.pop_back();
                }
            };
            rec(0);
            if (over) return std::nullopt;
            return out;
        }
    }
    return std::nullopt;
}

double moment_dual_value(const MomentSet& set, const RandomVariable& z) {
    const std::size_t n = set.support.size();
    require(z.size() == n, "random variable must live on the moment support");
    const std::size_t m = set.psi.size();
    lp::LinearProgram prog(m + 1, lp::Direction::Minimize);
    std::vector<double> c(m + 1);
    c[0] = 1.0;
    for (Index k = 0; k < m; ++k) c[k + 1] = set.targets[k];
    prog.set_objective(std::move(c));
    for (Index k = 0; k <= m; ++k) prog.set_bounds(k, kNegInf, kInf);
    for (Index x = 0; x < n; ++x) {
        std::vector<double> row(m + 1);
        row[0] = 1.0;
        for (Index k = 0; k < m; ++k) row[k + 1] = set.psi[k][x];
        prog.add_constraint(std::move(row), lp::Sense::GreaterEqual, z[x]);
    }
    const auto s = lp::solve(prog);
    if (s.status != lp::Status::Optimal) throw InternalError("moment dual LP ended " + lp::to_string(s.status));
    return s.value;
}

}  // namespace drmo
