#include "drmo/axioms.hpp"

#include <algorithm>
#include <cmath>

#include "drmo/random.hpp"

namespace drmo {

double AxiomReport::worst() const {
    return std::max({subadditivity, monotonicity, translation, homogeneity, lipschitz});
}

AxiomReport check_axioms(const AmbiguitySet& m, std::size_t trials, Rng& rng) {
    const std::size_t n = m.space_size();
    auto r = [&](const RandomVariable& z) { return robust_expectation(m, z).value; };
    AxiomReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const RandomVariable z = gen::variable(rng, n);
        const RandomVariable w = gen::variable(rng, n);
        const double rz = r(z), rw = r(w);

        rep.subadditivity = std::max(rep.subadditivity, r(z + w) - rz - rw);

        std::vector<double> up(z.values());
        for (auto& x : up) x += rng.coin(0.3) ? 0.0 : rng.uniform(0.0, 2.0);
        rep.monotonicity = std::max(rep.monotonicity, rz - r(RandomVariable(up)));

        const double a = rng.uniform(-10.0, 10.0);
        rep.translation = std::max(rep.translation, std::abs(r(z + a) - rz - a));

        const double lambda = rng.uniform(0.0, 5.0);
        rep.homogeneity = std::max(rep.homogeneity, std::abs(r(z * lambda) - lambda * rz));

        rep.lipschitz = std::max(rep.lipschitz, std::abs(rw - rz) - w.distance_sup(z));
    }
    return rep;
}

}  // namespace drmo
