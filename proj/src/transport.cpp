#include "drmo/transport.hpp"

#include <algorithm>
#include <cmath>

#include "drmo/error.hpp"
#include "drmo/lp.hpp"
#include "drmo/random.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

void check_pair(const DiscreteMeasure& p, const DiscreteMeasure& q, const FiniteSpace& space) {
    require(space.has_metric(), "transport needs a metric on the space");
    require(p.size() == space.size() && q.size() == space.size(), "measures live on a different space");
    require(p.is_probability() && q.is_probability(), "transport is defined between probability measures");
}

std::string pair_text(const std::vector<Index>& a, const std::vector<Index>& b) {
    auto tuple = [](const std::vector<Index>& t) {
        std::string s = "(";
        for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k]);
        return s + ")";
    };
    return tuple(a) + " and " + tuple(b);
}

std::vector<std::size_t> prefix(const std::vector<std::size_t>& dims, std::size_t stage) {
    return {dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(stage)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Distance

std::vector<double> TransportPlan::row_sums() const {
    std::vector<double> r(pi.size(), 0.0);
    for (Index i = 0; i < pi.size(); ++i)
        for (double v : pi[i]) r[i] += v;
    return r;
}

std::vector<double> TransportPlan::column_sums() const {
    std::vector<double> c(pi.empty() ? 0 : pi[0].size(), 0.0);
    for (const auto& row : pi)
        for (Index j = 0; j < row.size(); ++j) c[j] += row[j];
    return c;
}

W1Result wasserstein_1(const DiscreteMeasure& p, const DiscreteMeasure& q, const FiniteSpace& space) {
    check_pair(p, q, space);
    const std::size_t n = space.size();
    const Metric& d = space.metric();

    lp::LinearProgram primal(n * n);
    std::vector<double> cost(n * n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) cost[i * n + j] = d(i, j);
    primal.set_objective(cost);
    for (Index i = 0; i < n; ++i) {
        std::vector<double> row(n * n, 0.0);
        for (Index j = 0; j < n; ++j) row[i * n + j] = 1.0;
        primal.add_constraint(std::move(row), lp::Sense::Equal, p[i]);
    }
    // The last column sum follows from the others.
    for (Index j = 0; j + 1 < n; ++j) {
        std::vector<double> col(n * n, 0.0);
        for (Index i = 0; i < n; ++i) col[i * n + j] = 1.0;
        primal.add_constraint(std::move(col), lp::Sense::Equal, q[j]);
    }
    const auto s = lp::solve(primal);
    if (s.status != lp::Status::Optimal) throw InternalError("transport LP ended " + lp::to_string(s.status));

    W1Result out;
    out.plan.pi.assign(n, std::vector<double>(n, 0.0));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) out.plan.pi[i][j] = std::max(0.0, s.primal[i * n + j]);
    out.plan.cost = s.value;
    out.distance = std::max(0.0, s.value);

    lp::LinearProgram dual(n, lp::Direction::Maximize);
    std::vector<double> c(n);
    for (Index i = 0; i < n; ++i) {
        c[i] = p[i] - q[i];
        dual.set_bounds(i, i == 0 ? 0.0 : -kInf, i == 0 ? 0.0 : kInf);
    }
    dual.set_objective(c);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            std::vector<double> row(n, 0.0);
            row[i] = 1.0;
            row[j] = -1.0;
            dual.add_constraint(std::move(row), lp::Sense::LessEqual, d(i, j));
        }
    const auto ds = lp::solve(dual);
    if (ds.status != lp::Status::Optimal) throw InternalError("potential LP ended " + lp::to_string(ds.status));
    out.potential = ds.primal;
    out.dual = ds.value;
    return out;
}

double lipschitz_constant(const FiniteSpace& space, const RandomVariable& z) {
    require(z.size() == space.size(), "random variable lives on a different space");
    require(z.is_finite(), "Lipschitz constant needs a finite random variable");
    const Metric& d = space.metric();
    double l = 0.0;
    for (Index i = 0; i < z.size(); ++i)
        for (Index j = i + 1; j < z.size(); ++j) {
            const double diff = std::abs(z[i] - z[j]);
            if (d(i, j) > 0.0)
                l = std::max(l, diff / d(i, j));
            else if (diff > 0.0)
                return kInf;
        }
    return l;
}

KrCheck kr_bound_check(const DiscreteMeasure& p, const DiscreteMeasure& q, const FiniteSpace& space,
                       const RandomVariable& z) {
    check_pair(p, q, space);
    const double l = lipschitz_constant(space, z);
    const double lhs = std::abs(expectation(z, q) - expectation(z, p));
    if (l == kInf) return {lhs, kInf, l, true, true};
    const double rhs = l * wasserstein_1(p, q, space).distance;
    return {lhs, rhs, l, false, lhs <= rhs + tol::kEqual};
}

BallGapCheck ball_robust_gap_check(const DiscreteMeasure& center, double epsilon, const FiniteSpace& space,
                                   const RandomVariable& z) {
    require(std::isfinite(epsilon) && epsilon >= 0.0, "radius must be finite and nonnegative");
    const double l = lipschitz_constant(space, z);
    const double gap =
        robust_expectation(AmbiguitySet::wasserstein(center, epsilon, space), z).value - expectation(z, center);
    if (l == kInf) return {epsilon, gap, kInf, l, true, true};
    const double bound = l * epsilon;
    return {epsilon, gap, bound, l, false, gap <= bound + tol::kEqual};
}

std::vector<double> epsilon_grid(const FiniteSpace& space, std::size_t steps) {
    const double top = 1.2 * space.metric().diameter();
    std::vector<double> grid;
    for (std::size_t k = 0; k <= steps; ++k) grid.push_back(steps == 0 ? 0.0 : top * double(k) / double(steps));
    return grid;
}

BallGapSweep ball_gap_sweep(const DiscreteMeasure& center, const std::vector<double>& epsilons,
                            const FiniteSpace& space, const RandomVariable& z) {
    BallGapSweep out{{}, true, true};
    std::vector<double> grid = epsilons;
    std::sort(grid.begin(), grid.end());
    for (double e : grid) {
        auto row = ball_robust_gap_check(center, e, space, z);
        out.all_hold = out.all_hold && row.holds;
        if (!out.rows.empty() && row.gap < out.rows.back().gap - tol::kFeasibility) out.monotone = false;
        out.rows.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multistage

void MultistageBoundSpec::validate() const {
    require(!epsilon.empty(), "bound spec needs at least one stage");
    require(kappa.size() == epsilon.size() && weights.size() == epsilon.size(),
            "epsilon, kappa and weights need one entry per stage");
    for (std::size_t t = 0; t < epsilon.size(); ++t) {
        require(std::isfinite(epsilon[t]) && epsilon[t] >= 0.0, "epsilon must be finite and nonnegative");
        require(std::isfinite(kappa[t]) && kappa[t] >= 0.0, "kappa must be finite and nonnegative");
        require(std::isfinite(weights[t]) && weights[t] > 0.0, "weights must be finite and positive");
    }
    require(std::isfinite(lipschitz) && lipschitz >= 0.0, "Lipschitz constant must be finite and nonnegative");
}

double multistage_bound(const MultistageBoundSpec& spec) {
    spec.validate();
    const std::size_t T = spec.stage_count();
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        double growth = 1.0;
        for (std::size_t s = t + 1; s < T; ++s) growth *= 1.0 + spec.weights[s] * spec.kappa[s];
        sum += spec.epsilon[t] * spec.weights[t] * growth;
    }
    return spec.lipschitz * sum;
}

double stagewise_bound(const MultistageBoundSpec& spec) {
    spec.validate();
    double sum = 0.0;
    for (std::size_t t = 0; t < spec.stage_count(); ++t) sum += spec.epsilon[t] * spec.weights[t];
    return spec.lipschitz * sum;
}

std::vector<std::size_t> TransitionModel::dims() const {
    std::vector<std::size_t> d;
    for (const auto& s : stages) d.push_back(s.size());
    return d;
}

std::size_t TransitionModel::history_count(std::size_t stage) const {
    std::size_t n = 1;
    for (std::size_t s = 0; s < stage; ++s) n *= stages[s].size();
    return n;
}

std::size_t TransitionModel::scenario_count() const { return history_count(stages.size()); }

void TransitionModel::validate() const {
    require(!stages.empty(), "transition model needs at least one stage");
    require(transitions.size() == stages.size(), "one transition table per stage expected");
    for (std::size_t t = 0; t < stages.size(); ++t) {
        require(stages[t].has_metric(), "stage " + std::to_string(t) + " has no metric");
        require(transitions[t].size() == history_count(t),
                "stage " + std::to_string(t) + " needs one transition per history");
        for (const auto& p : transitions[t])
            require(p.size() == stages[t].size() && p.is_probability(),
                    "transitions of stage " + std::to_string(t) + " must be probabilities on its space");
    }
}

double history_distance(const TransitionModel& model, const std::vector<double>& weights, std::size_t stage,
                        Index h, Index other) {
    const auto dims = prefix(model.dims(), stage);
    const auto a = scenario_tuple(dims, h);
    const auto b = scenario_tuple(dims, other);
    double d = 0.0;
    for (std::size_t s = 0; s < stage; ++s) d += weights[s] * model.stages[s].metric()(a[s], b[s]);
    return d;
}

std::vector<double> transition_kappa(const TransitionModel& model, const std::vector<double>& weights) {
    model.validate();
    require(weights.size() == model.stage_count(), "one weight per stage expected");
    std::vector<double> kappa(model.stage_count(), 0.0);
    for (std::size_t t = 1; t < model.stage_count(); ++t) {
        const auto& laws = model.transitions[t];
        for (Index h = 0; h < laws.size(); ++h)
            for (Index g = h + 1; g < laws.size(); ++g) {
                const double w = wasserstein_1(laws[h], laws[g], model.stages[t]).distance;
                const double d = history_distance(model, weights, t, h, g);
                if (d > 0.0)
                    kappa[t] = std::max(kappa[t], w / d);
                else if (w > tol::kFeasibility)
                    kappa[t] = kInf;
            }
    }
    return kappa;
}

void check_transition_lipschitz(const TransitionModel& model, const MultistageBoundSpec& spec) {
    model.validate();
    spec.validate();
    require(spec.stage_count() == model.stage_count(), "bound spec and model have different stage counts");
    const auto dims = model.dims();
    for (std::size_t t = 1; t < model.stage_count(); ++t) {
        const auto& laws = model.transitions[t];
        for (Index h = 0; h < laws.size(); ++h)
            for (Index g = h + 1; g < laws.size(); ++g) {
                const double w = wasserstein_1(laws[h], laws[g], model.stages[t]).distance;
                const double allowed = spec.kappa[t] * history_distance(model, spec.weights, t, h, g);
                if (w > allowed + tol::kFeasibility)
                    throw ValidationError("transitions of stage " + std::to_string(t) + " at histories " +
                                          pair_text(scenario_tuple(prefix(dims, t), h),
                                                    scenario_tuple(prefix(dims, t), g)) +
                                          " are " + std::to_string(w) + " apart, kappa allows " +
                                          std::to_string(allowed));
            }
    }
}

void check_objective_lipschitz(const TransitionModel& model, const MultistageBoundSpec& spec, const RandomVariable& z) {
    model.validate();
    spec.validate();
    require(z.size() == model.scenario_count(), "random variable must have one value per scenario");
    const auto dims = model.dims();
    const std::size_t T = model.stage_count();
    for (Index s = 0; s < z.size(); ++s)
        for (Index r = s + 1; r < z.size(); ++r) {
            const double d = history_distance(model, spec.weights, T, s, r);
            const double diff = std::abs(z[s] - z[r]);
            if (diff > spec.lipschitz * d + tol::kEqual * std::max(1.0, diff))
                throw ValidationError("objective violates the Lipschitz certificate at scenarios " +
                                      pair_text(scenario_tuple(dims, s), scenario_tuple(dims, r)) + ": |dZ| = " +
                                      std::to_string(diff) + " > " + std::to_string(spec.lipschitz * d));
        }
}

namespace {

// Product tree with node sets filled by `make(stage, history)`.
template <class F>
HistoryDependentSpec product_tree(const TransitionModel& model, F&& make) {
    const auto dims = model.dims();
    HistoryDependentSpec out{ScenarioTree::product(dims), {}};
    out.node_sets.resize(out.tree.node_count());
    // Breadth-first numbering: the nodes of one depth are consecutive and in
    // lexicographic order of their histories.
    Index first = 0;
    for (std::size_t t = 0; t < dims.size(); ++t) {
        const std::size_t count = model.history_count(t);
        for (Index h = 0; h < count; ++h) out.node_sets[first + h] = make(t, h);
        first += count;
    }
    return out;
}

}  // namespace

HistoryDependentSpec wasserstein_tree(const TransitionModel& model, const MultistageBoundSpec& spec) {
    model.validate();
    spec.validate();
    require(spec.stage_count() == model.stage_count(), "bound spec and model have different stage counts");
    return product_tree(model, [&](std::size_t t, Index h) {
        const auto& laws = model.transitions[t];
        std::vector<Ball> balls{{laws[h], spec.epsilon[t]}};
        for (Index g = 0; g < laws.size(); ++g)
            if (g != h)
                balls.push_back({laws[g], spec.epsilon[t] + spec.kappa[t] * history_distance(model, spec.weights, t, h, g)});
        return AmbiguitySet::wasserstein_intersection(model.stages[t], std::move(balls));
    });
}

HistoryDependentSpec reference_tree(const TransitionModel& model) {
    model.validate();
    return product_tree(model, [&](std::size_t t, Index h) { return AmbiguitySet::singleton(model.transitions[t][h]); });
}

MultistageCheck multistage_bound_empirical_check(const TransitionModel& model, const MultistageBoundSpec& spec,
                                                 const RandomVariable& z) {
    check_transition_lipschitz(model, spec);
    check_objective_lipschitz(model, spec, z);
    MultistageCheck out;
    out.nested = nested_on_tree(wasserstein_tree(model, spec), z).value;
    out.reference = nested_on_tree(reference_tree(model), z).value;
    out.gap = std::abs(out.nested - out.reference);
    out.bound = multistage_bound(spec);
    out.holds = out.gap <= out.bound + tol::kFeasibility;
    return out;
}

namespace gen {

TransitionModel transition_model(Rng& rng, const std::vector<std::size_t>& dims) {
    TransitionModel m;
    for (std::size_t n : dims) m.stages.push_back(metric_space(rng, n));
    for (std::size_t t = 0; t < dims.size(); ++t) {
        std::vector<DiscreteMeasure> laws;
        for (Index h = 0; h < m.history_count(t); ++h) laws.push_back(probability(rng, dims[t], 0.2));
        m.transitions.push_back(std::move(laws));
    }
    return m;
}

TransitionModel independent_model(Rng& rng, const std::vector<std::size_t>& dims) {
    TransitionModel m;
    for (std::size_t n : dims) m.stages.push_back(metric_space(rng, n));
    for (std::size_t t = 0; t < dims.size(); ++t)
        m.transitions.emplace_back(m.history_count(t), probability(rng, dims[t], 0.2));
    return m;
}

RandomVariable lipschitz_objective(Rng& rng, const TransitionModel& model, const std::vector<double>& weights,
                                   double lipschitz) {
    const auto dims = model.dims();
    const std::size_t cones = rng.between(1, 3);
    std::vector<double> offset(cones);
    std::vector<std::vector<Index>> anchor(cones);
    for (std::size_t k = 0; k < cones; ++k) {
        offset[k] = rng.uniform();
        for (std::size_t n : dims) anchor[k].push_back(rng.index(n));
    }
    std::vector<double> z(model.scenario_count());
    for (Index s = 0; s < z.size(); ++s) {
        const auto tuple = scenario_tuple(dims, s);
        double best = kInf;
        for (std::size_t k = 0; k < cones; ++k) {
            double v = offset[k];
            for (std::size_t t = 0; t < dims.size(); ++t)
                v += weights[t] * model.stages[t].metric()(tuple[t], anchor[k][t]);
            best = std::min(best, v);
        }
        z[s] = lipschitz * best;
    }
    return RandomVariable(std::move(z));
}

}  // namespace gen

}  // namespace drmo
