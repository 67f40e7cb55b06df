#include "drmo/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drmo/conditional.hpp"
#include "drmo/error.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

// ---------------------------------------------------------------------------
// Filtration composition

CompositeResult composite_functional(const AmbiguitySet& m, const Filtration& f, const RandomVariable& z) {
    if (f.space_size() != m.space_size() || z.size() != m.space_size())
        throw ValidationError("ambiguity set, filtration and random variable live on different spaces");
    const std::size_t stages = f.stage_count();
    std::vector<RandomVariable> values(stages);
    RandomVariable current = z;
    for (std::size_t t = stages; t-- > 0;) {
        const auto c = conditional_robust(m, current, f.stage(t));
        for (Index k = 0; k < c.per_atom.size(); ++k)
            if (c.per_atom[k] == kNegInf) throw UnreachableAtomError(t, k);
        current = RandomVariable(c.expanded().values());
        values[t] = current;
    }
    return {values[0][0], std::move(values)};
}

Comparison composite_dominates_static(const AmbiguitySet& m, const Filtration& f, const RandomVariable& z) {
    const double lower = robust_expectation(m, z).value;
    const double upper = composite_functional(m, f, z).value;
    return {lower, upper, lower <= upper + tol::kEqual};
}

// ---------------------------------------------------------------------------
// Rectangular setting

std::vector<std::size_t> RectangularSpec::dims() const {
    std::vector<std::size_t> d;
    for (const auto& s : stages) d.push_back(s.space_size());
    return d;
}

std::size_t RectangularSpec::scenario_count() const {
    std::size_t n = 1;
    for (const auto& s : stages) n *= s.space_size();
    return n;
}

void RectangularSpec::validate() const {
    if (stages.empty()) throw ValidationError("a rectangular spec needs at least one stage");
}

Index scenario_index(const std::vector<std::size_t>& dims, const std::vector<Index>& tuple) {
    Index s = 0;
    for (std::size_t t = 0; t < dims.size(); ++t) s = s * dims[t] + tuple[t];
    return s;
}

std::vector<Index> scenario_tuple(const std::vector<std::size_t>& dims, Index scenario) {
    std::vector<Index> tuple(dims.size());
    for (std::size_t t = dims.size(); t-- > 0;) {
        tuple[t] = scenario % dims[t];
        scenario /= dims[t];
    }
    return tuple;
}

Filtration product_filtration(const RectangularSpec& spec) {
    spec.validate();
    const auto dims = spec.dims();
    const std::size_t n = spec.scenario_count();
    std::vector<Partition> stages;
    std::size_t tail = n;
    for (std::size_t k = 0; k <= dims.size(); ++k) {
        std::vector<Index> labels(n);
        for (Index s = 0; s < n; ++s) labels[s] = s / tail;
        stages.push_back(Partition::from_labels(labels));
        if (k < dims.size()) tail /= dims[k];
    }
    return Filtration(std::move(stages));
}

NestedResult rectangular_nested(const RectangularSpec& spec, const RandomVariable& z) {
    spec.validate();
    if (z.size() != spec.scenario_count()) throw ValidationError("random variable must have one value per scenario");
    const std::size_t T = spec.stage_count();
    std::vector<std::vector<double>> tables(T + 1);
    tables[T] = z.values();
    for (std::size_t t = T; t-- > 0;) {
        const std::size_t width = spec.stages[t].space_size();
        const auto& next = tables[t + 1];
        std::vector<double> cur(next.size() / width);
        for (Index h = 0; h < cur.size(); ++h) {
            RandomVariable block(std::vector<double>(next.begin() + h * width, next.begin() + (h + 1) * width));
            cur[h] = robust_expectation(spec.stages[t], block).value;
        }
        tables[t] = std::move(cur);
    }
    return {tables[0][0], std::move(tables)};
}

std::optional<std::vector<std::vector<DiscreteMeasure>>> stage_vertices(const RectangularSpec& spec) {
    std::vector<std::vector<DiscreteMeasure>> out;
    for (const auto& s : spec.stages) {
        auto v = enumerate_vertices(s);
        if (!v) return std::nullopt;
        out.push_back(std::move(*v));
    }
    return out;
}

DiscreteMeasure product_measure(const std::vector<DiscreteMeasure>& marginals) {
    std::vector<double> w{1.0};
    for (const auto& q : marginals) {
        std::vector<double> next;
        next.reserve(w.size() * q.size());
        for (double a : w)
            for (Index i = 0; i < q.size(); ++i) next.push_back(a * q[i]);
        w = std::move(next);
    }
    return DiscreteMeasure(std::move(w));
}

namespace {

constexpr std::size_t kProductCap = 1000000;

std::size_t tuple_count(const std::vector<std::vector<DiscreteMeasure>>& verts) {
    std::size_t count = 1;
    for (const auto& v : verts) {
        if (v.empty()) return 0;
        if (count > kProductCap / v.size()) return kProductCap + 1;
        count *= v.size();
    }
    return count;
}

// Visits every tuple of vertex indices in lexicographic order.
template <class F>
void for_each_tuple(const std::vector<std::vector<DiscreteMeasure>>& verts, F&& visit) {
    std::vector<Index> pick(verts.size(), 0);
    for (;;) {
        visit(pick);
        std::size_t t = verts.size();
        while (t > 0) {
            --t;
            if (++pick[t] < verts[t].size()) break;
            pick[t] = 0;
            if (t == 0) return;
        }
        if (verts.empty()) return;
    }
}

double product_expectation(const std::vector<std::size_t>& dims, const std::vector<DiscreteMeasure>& q,
                           const RandomVariable& z) {
    double total = 0.0;
    for (Index s = 0; s < z.size(); ++s) {
        const auto tuple = scenario_tuple(dims, s);
        double w = 1.0;
        for (std::size_t t = 0; t < dims.size() && w != 0.0; ++t) w *= q[t][tuple[t]];
        total += w * z[s];
    }
    return total;
}

// Objective of stage t with the other marginals held fixed.
RandomVariable stage_objective(const std::vector<std::size_t>& dims, const std::vector<DiscreteMeasure>& q,
                               const RandomVariable& z, std::size_t stage) {
    std::vector<double> c(dims[stage], 0.0);
    for (Index s = 0; s < z.size(); ++s) {
        const auto tuple = scenario_tuple(dims, s);
        double w = 1.0;
        for (std::size_t t = 0; t < dims.size(); ++t)
            if (t != stage) w *= q[t][tuple[t]];
        c[tuple[stage]] += w * z[s];
    }
    return RandomVariable(std::move(c));
}

}  // namespace

AmbiguitySet product_family(const RectangularSpec& spec) {
    spec.validate();
    auto verts = stage_vertices(spec);
    if (!verts) throw PreconditionError("every stage set must have a vertex list to form the product family");
    if (tuple_count(*verts) > kProductCap) throw CapExceededError("product family exceeds 10^6 vertex products");
    std::vector<DiscreteMeasure> members;
    for_each_tuple(*verts, [&](const std::vector<Index>& pick) {
        std::vector<DiscreteMeasure> marginals;
        for (std::size_t t = 0; t < pick.size(); ++t) marginals.push_back((*verts)[t][pick[t]]);
        members.push_back(product_measure(marginals));
    });
    return AmbiguitySet::finite_family(std::move(members));
}

EquivalenceCheck rectangular_equivalence_check(const RectangularSpec& spec, const RandomVariable& z) {
    const double nested = rectangular_nested(spec, z).value;
    const double composite = composite_functional(product_family(spec), product_filtration(spec), z).value;
    return {nested, composite, std::abs(nested - composite) <= tol::kFeasibility};
}

StaticResult static_rectangular(const RectangularSpec& spec, const RandomVariable& z) {
    spec.validate();
    if (z.size() != spec.scenario_count()) throw ValidationError("random variable must have one value per scenario");
    const auto dims = spec.dims();
    auto verts = stage_vertices(spec);
    if (verts && tuple_count(*verts) <= kProductCap) {
        StaticResult best{kNegInf, {}, false};
        for_each_tuple(*verts, [&](const std::vector<Index>& pick) {
            std::vector<DiscreteMeasure> q;
            for (std::size_t t = 0; t < pick.size(); ++t) q.push_back((*verts)[t][pick[t]]);
            const double v = product_expectation(dims, q, z);
            if (v > best.value) best = {v, std::move(q), false};
        });
        return best;
    }

    // Alternating stagewise maximization; each step is an exact worst case in
    // one coordinate, so the value never decreases. Restarts from random members.
    Rng rng(42);
    StaticResult best{kNegInf, {}, true};
    for (int restart = 0; restart < 8; ++restart) {
        std::vector<DiscreteMeasure> q;
        for (const auto& s : spec.stages) q.push_back(sample_member(s, rng));
        double value = product_expectation(dims, q, z);
        for (int sweep = 0; sweep < 200; ++sweep) {
            bool moved = false;
            for (std::size_t t = 0; t < dims.size(); ++t) {
                auto r = robust_expectation(spec.stages[t], stage_objective(dims, q, z, t));
                if (r.value > value + 1e-12) {
                    value = r.value;
                    q[t] = std::move(r.argmax);
                    moved = true;
                }
            }
            if (!moved) break;
        }
        if (value > best.value) best = {value, std::move(q), true};
    }
    return best;
}

RectangularSpec permute_stages(const RectangularSpec& spec, const std::vector<std::size_t>& perm) {
    if (perm.size() != spec.stage_count()) throw ValidationError("permutation length must match the stage count");
    std::vector<bool> seen(perm.size(), false);
    RectangularSpec out;
    for (std::size_t k : perm) {
        if (k >= perm.size() || seen[k]) throw ValidationError("not a permutation of the stages");
        seen[k] = true;
        out.stages.push_back(spec.stages[k]);
    }
    return out;
}

RandomVariable permute_scenarios(const RectangularSpec& spec, const RandomVariable& z,
                                 const std::vector<std::size_t>& perm) {
    const auto dims = spec.dims();
    const auto new_dims = permute_stages(spec, perm).dims();
    std::vector<double> out(z.size());
    for (Index s = 0; s < z.size(); ++s) {
        const auto tuple = scenario_tuple(dims, s);
        std::vector<Index> moved(tuple.size());
        for (std::size_t k = 0; k < perm.size(); ++k) moved[k] = tuple[perm[k]];
        out[scenario_index(new_dims, moved)] = z[s];
    }
    return RandomVariable(std::move(out));
}

PermutationCheck permutation_invariance_check(const RectangularSpec& spec, const RandomVariable& z,
                                              const std::vector<std::vector<std::size_t>>& perms) {
    PermutationCheck out{{}, {}, true, false, 0.0};
    std::vector<std::size_t> identity(spec.stage_count());
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> orders{identity};
    orders.insert(orders.end(), perms.begin(), perms.end());
    for (const auto& perm : orders) {
        const auto s = permute_stages(spec, perm);
        const auto w = permute_scenarios(spec, z, perm);
        out.static_values.push_back(static_rectangular(s, w).value);
        out.nested_values.push_back(rectangular_nested(s, w).value);
    }
    for (std::size_t k = 1; k < orders.size(); ++k) {
        out.static_invariant =
            out.static_invariant && std::abs(out.static_values[k] - out.static_values[0]) <= tol::kEqual;
        out.nested_spread = std::max(out.nested_spread, std::abs(out.nested_values[k] - out.nested_values[0]));
    }
    out.nested_changed = out.nested_spread > tol::kEqual;
    return out;
}

InducedSet induced_set(const RectangularSpec& spec, std::size_t cap) {
    spec.validate();
    if (spec.stage_count() != 2) throw PreconditionError("the induced set is built for two stages only");
    auto verts = stage_vertices(spec);
    if (!verts) throw PreconditionError("both stage sets must have a vertex list");
    const auto& v1 = (*verts)[0];
    const auto& v2 = (*verts)[1];
    const std::size_t n = spec.stages[0].space_size();
    const std::size_t width = spec.stages[1].space_size();

    std::size_t count = v1.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (count > cap / v2.size()) throw CapExceededError("induced set would exceed the enumeration cap; shrink the instance");
        count *= v2.size();
    }
    if (count > cap) throw CapExceededError("induced set would exceed the enumeration cap; shrink the instance");

    InducedSet out;
    out.pre_dedup_count = count;
    std::vector<std::vector<double>> raw;
    raw.reserve(count);
    std::vector<Index> selector(n, 0);
    for (const auto& q1 : v1) {
        std::fill(selector.begin(), selector.end(), 0);
        for (;;) {
            std::vector<double> w(n * width);
            for (Index a = 0; a < n; ++a)
                for (Index b = 0; b < width; ++b) w[a * width + b] = q1[a] * v2[selector[a]][b];
            raw.push_back(std::move(w));
            std::size_t k = n;
            bool done = true;
            while (k-- > 0) {
                if (++selector[k] < v2.size()) {
                    done = false;
                    break;
                }
                selector[k] = 0;
            }
            if (done) break;
        }
        for (const auto& q2 : v2) out.family_one.push_back(product_measure({q1, q2}));
    }

    std::sort(raw.begin(), raw.end());
    for (auto& w : raw) {
        if (!out.measures.empty()) {
            const auto& last = out.measures.back().weights();
            double d = 0.0;
            for (Index i = 0; i < w.size(); ++i) d = std::max(d, std::abs(w[i] - last[i]));
            if (d <= tol::kDedup) continue;
        }
        out.measures.emplace_back(std::move(w));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario trees

void HistoryDependentSpec::validate() const {
    if (node_sets.size() != tree.node_count()) throw ValidationError("one ambiguity slot per tree node expected");
    for (Index v = 0; v < tree.node_count(); ++v) {
        if (tree.is_leaf(v)) continue;
        if (!node_sets[v]) throw ValidationError("inner node " + std::to_string(v) + " has no ambiguity set");
        if (node_sets[v]->space_size() != tree.node(v).children.size())
            throw ValidationError("ambiguity set of node " + std::to_string(v) + " must range over its children");
    }
}

TreeNestedResult nested_on_tree(const HistoryDependentSpec& spec, const RandomVariable& z) {
    spec.validate();
    const auto& tree = spec.tree;
    if (z.size() != tree.leaf_count()) throw ValidationError("random variable must have one value per scenario");
    std::vector<double> value(tree.node_count(), 0.0);
    const auto& leaves = tree.leaves();
    for (Index k = 0; k < leaves.size(); ++k) value[leaves[k]] = z[k];
    for (Index v = tree.node_count(); v-- > 0;) {
        if (tree.is_leaf(v)) continue;
        std::vector<double> child;
        for (Index c : tree.node(v).children) child.push_back(value[c]);
        value[v] = robust_expectation(*spec.node_sets[v], RandomVariable(std::move(child))).value;
    }
    return {value[0], std::move(value)};
}

}  // namespace drmo
