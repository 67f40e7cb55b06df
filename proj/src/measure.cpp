#include "drmo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drmo/error.hpp"
#include "drmo/tolerance.hpp"

namespace drmo {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Metric

Metric::Metric(std::vector<std::vector<double>> distances) : d_(std::move(distances)) {
    const std::size_t n = d_.size();
    require(n >= 1, "metric must cover at least one outcome");
    for (std::size_t i = 0; i < n; ++i) {
        require(d_[i].size() == n, "metric table must be square");
        for (std::size_t j = 0; j < n; ++j) {
            require(std::isfinite(d_[i][j]), "metric entries must be finite");
            require(d_[i][j] >= 0.0, "metric entries must be nonnegative");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        require(d_[i][i] == 0.0, "metric diagonal must be zero (outcome " + std::to_string(i) + ")");
        for (std::size_t j = i + 1; j < n; ++j)
            require(std::abs(d_[i][j] - d_[j][i]) <= tol::kEqual,
                    "metric must be symmetric (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                require(d_[i][k] <= d_[i][j] + d_[j][k] + tol::kEqual,
                        "metric violates the triangle inequality at (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) + ")");
}

double Metric::diameter() const {
    double best = 0.0;
    for (const auto& row : d_)
        for (double x : row) best = std::max(best, x);
    return best;
}

Metric Metric::line(std::span<const double> points) {
    std::vector<std::vector<double>> d(points.size(), std::vector<double>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) d[i][j] = std::abs(points[i] - points[j]);
    return Metric(std::move(d));
}

// ---------------------------------------------------------------------------
// FiniteSpace

FiniteSpace::FiniteSpace(std::size_t n, std::vector<std::string> labels, std::optional<Metric> metric)
    : n_(n), labels_(std::move(labels)), metric_(std::move(metric)) {
    require(n_ >= 1, "a finite space needs at least one outcome");
    require(labels_.empty() || labels_.size() == n_, "label count must match the outcome count");
    require(!metric_ || metric_->size() == n_, "metric size must match the outcome count");
}

const Metric& FiniteSpace::metric() const {
    if (!metric_) throw ValidationError("space has no metric");
    return *metric_;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<double> weights) : w_(std::move(weights)) {
    require(!w_.empty(), "a measure needs at least one outcome");
    for (double x : w_) {
        require(std::isfinite(x), "measure weights must be finite");
        require(x >= 0.0, "measure weights must be nonnegative");
    }
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n) {
    require(n >= 1, "uniform measure needs at least one outcome");
    return DiscreteMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::dirac(std::size_t n, Index at) {
    require(at < n, "dirac location out of range");
    std::vector<double> w(n, 0.0);
    w[at] = 1.0;
    return DiscreteMeasure(std::move(w));
}

double DiscreteMeasure::total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

double DiscreteMeasure::mass(std::span<const Index> set) const {
    double m = 0.0;
    for (Index i : set) m += w_.at(i);
    return m;
}

bool DiscreteMeasure::is_probability() const { return std::abs(total() - 1.0) <= tol::kEqual; }

DiscreteMeasure DiscreteMeasure::normalized() const {
    const double t = total();
    require(t > 0.0, "cannot normalize a zero measure");
    std::vector<double> w(w_);
    for (double& x : w) x /= t;
    return DiscreteMeasure(std::move(w));
}

std::vector<Index> DiscreteMeasure::support(double threshold) const {
    std::vector<Index> s;
    for (Index i = 0; i < w_.size(); ++i)
        if (w_[i] > threshold) s.push_back(i);
    return s;
}

// ---------------------------------------------------------------------------
// RandomVariable

RandomVariable::RandomVariable(std::vector<double> values) : v_(std::move(values)) {
    require(!v_.empty(), "a random variable needs at least one outcome");
    for (double x : v_) require(std::isfinite(x), "random variable values must be finite");
}

RandomVariable RandomVariable::constant(std::size_t n, double c) { return RandomVariable(std::vector<double>(n, c)); }

RandomVariable RandomVariable::extended(std::vector<double> values) {
    RandomVariable z;
    for (double x : values)
        require(!std::isnan(x) && x != kInf, "extended values must be finite or -inf");
    z.v_ = std::move(values);
    return z;
}

bool RandomVariable::is_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

double RandomVariable::max() const { return *std::max_element(v_.begin(), v_.end()); }
double RandomVariable::min() const { return *std::min_element(v_.begin(), v_.end()); }

RandomVariable RandomVariable::operator+(const RandomVariable& other) const {
    require(size() == other.size(), "random variables live on different spaces");
    std::vector<double> r(v_);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += other.v_[i];
    return RandomVariable(std::move(r));
}

RandomVariable RandomVariable::operator-(const RandomVariable& other) const {
    require(size() == other.size(), "random variables live on different spaces");
    std::vector<double> r(v_);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= other.v_[i];
    return RandomVariable(std::move(r));
}

RandomVariable RandomVariable::operator+(double a) const {
    std::vector<double> r(v_);
    for (double& x : r) x += a;
    return RandomVariable(std::move(r));
}

RandomVariable RandomVariable::operator*(double lambda) const {
    std::vector<double> r(v_);
    for (double& x : r) x *= lambda;
    return RandomVariable(std::move(r));
}

double RandomVariable::distance_sup(const RandomVariable& other) const {
    require(size() == other.size(), "random variables live on different spaces");
    double d = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) d = std::max(d, std::abs(v_[i] - other.v_[i]));
    return d;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::size_t n, std::vector<std::vector<Index>> atoms)
    : n_(n), atoms_(std::move(atoms)), owner_(n, n) {
    require(n_ >= 1, "a partition needs at least one outcome");
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        require(!atoms_[k].empty(), "partition atoms must be nonempty");
        for (Index i : atoms_[k]) {
            require(i < n_, "partition atom references outcome " + std::to_string(i) + " out of range");
            require(owner_[i] == n_, "partition atoms must be disjoint (outcome " + std::to_string(i) + ")");
            owner_[i] = k;
        }
    }
    for (Index i = 0; i < n_; ++i)
        require(owner_[i] != n_, "partition must cover outcome " + std::to_string(i));
}

Partition Partition::trivial(std::size_t n) {
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), Index{0});
    return Partition(n, {std::move(all)});
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::vector<Index>> atoms(n);
    for (Index i = 0; i < n; ++i) atoms[i] = {i};
    return Partition(n, std::move(atoms));
}

Partition Partition::from_labels(std::span<const Index> labels) {
    std::vector<std::vector<Index>> atoms;
    std::vector<Index> seen;  // label of each atom
    for (Index i = 0; i < labels.size(); ++i) {
        auto it = std::find(seen.begin(), seen.end(), labels[i]);
        if (it == seen.end()) {
            seen.push_back(labels[i]);
            atoms.push_back({i});
        } else {
            atoms[static_cast<std::size_t>(it - seen.begin())].push_back(i);
        }
    }
    return Partition(labels.size(), std::move(atoms));
}

RandomVariable Partition::expand(std::span<const double> per_atom) const {
    require(per_atom.size() == atoms_.size(), "one value per atom expected");
    std::vector<double> v(n_);
    for (Index i = 0; i < n_; ++i) v[i] = per_atom[owner_[i]];
    return RandomVariable::extended(std::move(v));
}

bool Partition::measurable(const RandomVariable& z, double tol) const {
    require(z.size() == n_, "random variable and partition live on different spaces");
    for (const auto& a : atoms_)
        for (Index i : a)
            if (std::abs(z[i] - z[a.front()]) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Filtration

Filtration::Filtration(std::vector<Partition> stages) : stages_(std::move(stages)) {
    require(!stages_.empty(), "a filtration needs at least one stage");
    require(stages_.front().is_trivial(), "the first stage of a filtration must be trivial");
    for (std::size_t t = 1; t < stages_.size(); ++t) {
        require(stages_[t].space_size() == stages_[0].space_size(), "filtration stages live on different spaces");
        require(refines(stages_[t], stages_[t - 1]),
                "filtration stage " + std::to_string(t) + " does not refine its predecessor");
    }
}

// ---------------------------------------------------------------------------
// Operations

double expectation(const RandomVariable& z, const DiscreteMeasure& q) {
    require(z.size() == q.size(), "random variable and measure live on different spaces");
    require(q.is_probability(), "expectation requires a probability measure");
    require(z.is_finite(), "expectation requires a finite random variable");
    double s = 0.0;
    for (Index i = 0; i < z.size(); ++i) s += z[i] * q[i];
    return s;
}

RandomVariable conditional_expectation(const RandomVariable& z, const DiscreteMeasure& q, const Partition& g) {
    require(z.size() == q.size() && z.size() == g.space_size(), "inputs live on different spaces");
    require(q.is_probability(), "conditional expectation requires a probability measure");
    require(z.is_finite(), "conditional expectation requires a finite random variable");
    std::vector<double> per_atom(g.atom_count());
    for (Index k = 0; k < g.atom_count(); ++k) {
        double mass = 0.0, integral = 0.0;
        for (Index i : g.atom(k)) {
            mass += q[i];
            integral += q[i] * z[i];
        }
        per_atom[k] = mass > 0.0 ? integral / mass : kNegInf;
    }
    return g.expand(per_atom);
}

bool refines(const Partition& fine, const Partition& coarse) {
    require(fine.space_size() == coarse.space_size(), "partitions live on different spaces");
    for (const auto& a : fine.atoms()) {
        const Index owner = coarse.atom_of(a.front());
        for (Index i : a)
            if (coarse.atom_of(i) != owner) return false;
    }
    return true;
}

}  // namespace drmo
