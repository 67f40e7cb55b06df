#include "drmo/random.hpp"

#include <algorithm>
#include <cmath>

namespace drmo::gen {

DiscreteMeasure probability(Rng& rng, std::size_t n, double zero_chance) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.coin(zero_chance) ? 0.0 : rng.uniform(0.05, 1.0));
    if (total == 0.0) {
        const Index keep = rng.index(n);
        w[keep] = total = 1.0;
    }
    for (auto& x : w) x /= total;
    return DiscreteMeasure(std::move(w));
}

RandomVariable variable(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return RandomVariable(std::move(v));
}

Partition partition(Rng& rng, std::size_t n, std::size_t max_atoms) {
    std::vector<Index> labels(n);
    for (auto& l : labels) l = rng.index(std::max<std::size_t>(1, max_atoms));
    return Partition::from_labels(labels);
}

Partition coarsen(Rng& rng, const Partition& fine, std::size_t groups) {
    std::vector<Index> labels(fine.space_size());
    for (Index k = 0; k < fine.atom_count(); ++k) {
        const Index g = rng.index(std::max<std::size_t>(1, groups));
        for (Index i : fine.atom(k)) labels[i] = g;
    }
    return Partition::from_labels(labels);
}

Filtration filtration(Rng& rng, std::size_t n, std::size_t stages) {
    std::vector<Partition> rev{Partition::singletons(n)};
    for (std::size_t t = 2; t < stages; ++t) {
        const auto& fine = rev.back();
        rev.push_back(coarsen(rng, fine, std::max<std::size_t>(1, (fine.atom_count() + 1) / 2)));
    }
    if (stages >= 2) rev.push_back(Partition::trivial(n));
    std::reverse(rev.begin(), rev.end());
    if (stages < 2) rev = {Partition::trivial(n)};
    return Filtration(std::move(rev));
}

FiniteSpace metric_space(Rng& rng, std::size_t n) {
    std::vector<double> x(n), y(n);
    for (Index i = 0; i < n; ++i) {
        x[i] = rng.uniform();
        y[i] = rng.uniform();
    }
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) d[i][j] = i == j ? 0.0 : std::hypot(x[i] - x[j], y[i] - y[j]);
    return FiniteSpace(n, {}, Metric(std::move(d)));
}

AmbiguitySet ambiguity_set(Rng& rng, AmbiguityKind kind, std::size_t n) {
    switch (kind) {
        case AmbiguityKind::FiniteFamily: {
            std::vector<DiscreteMeasure> members;
            const std::size_t m = rng.between(1, 4);
            for (std::size_t k = 0; k < m; ++k) members.push_back(probability(rng, n, 0.25));
            return AmbiguitySet::finite_family(std::move(members));
        }
        case AmbiguityKind::Avar: return AmbiguitySet::avar(rng.uniform(0.0, 0.9), probability(rng, n, 0.15));
        case AmbiguityKind::Moment: {
            std::vector<double> grid(n);
            for (auto& g : grid) g = rng.uniform();
            std::sort(grid.begin(), grid.end());
            std::vector<RandomVariable> psi{RandomVariable(grid)};
            if (n >= 3 && rng.coin()) {
                std::vector<double> sq(n);
                for (Index i = 0; i < n; ++i) sq[i] = grid[i] * grid[i];
                psi.emplace_back(std::move(sq));
            }
            const DiscreteMeasure seed = probability(rng, n);
            std::vector<double> targets;
            for (const auto& f : psi) targets.push_back(expectation(f, seed));
            return AmbiguitySet::moment(FiniteSpace(n, {}, Metric::line(grid)), std::move(psi), std::move(targets));
        }
        case AmbiguityKind::Wasserstein: {
            FiniteSpace space = metric_space(rng, n);
            const double radius = rng.uniform(0.0, 0.5 * std::max(space.metric().diameter(), 1e-3));
            return AmbiguitySet::wasserstein(probability(rng, n, 0.2), radius, std::move(space));
        }
    }
    return AmbiguitySet::simplex(n);
}

}  // namespace drmo::gen
