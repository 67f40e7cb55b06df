#pragma once

// Finite probability spaces: outcomes, measures, random variables,
// partitions and filtrations. Every type is an immutable value validated at
// construction; outcomes are identified by index.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drmo {

using Index = std::size_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Symmetric distance table on a finite space.
class Metric {
public:
    Metric() = default;
    /// Validates zero diagonal, symmetry, nonnegativity and the triangle inequality.
    explicit Metric(std::vector<std::vector<double>> distances);

    std::size_t size() const noexcept { return d_.size(); }
    double operator()(Index i, Index j) const { return d_[i][j]; }
    double diameter() const;
    const std::vector<std::vector<double>>& table() const noexcept { return d_; }

    /// |x_i - x_j| on the real line.
    static Metric line(std::span<const double> points);

private:
    std::vector<std::vector<double>> d_;
};

class FiniteSpace {
public:
    explicit FiniteSpace(std::size_t n, std::vector<std::string> labels = {},
                         std::optional<Metric> metric = std::nullopt);

    std::size_t size() const noexcept { return n_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    bool has_metric() const noexcept { return metric_.has_value(); }
    /// Throws ValidationError when the space carries no metric.
    const Metric& metric() const;

private:
    std::size_t n_;
    std::vector<std::string> labels_;
    std::optional<Metric> metric_;
};

/// Nonnegative finite mass per outcome.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::vector<double> weights);

    static DiscreteMeasure uniform(std::size_t n);
    static DiscreteMeasure dirac(std::size_t n, Index at);

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](Index i) const { return w_[i]; }
    const std::vector<double>& weights() const noexcept { return w_; }

    double total() const;
    double mass(std::span<const Index> set) const;
    /// Total mass is one within tol::kEqual.
    bool is_probability() const;
    /// Divides by the total mass; throws when the total is zero.
    DiscreteMeasure normalized() const;
    std::vector<Index> support(double threshold = 0.0) const;

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    std::vector<double> w_;
};

/// Real value per outcome. User-supplied values are finite; -inf appears only
/// in outputs of conditional functionals on unreachable atoms.
class RandomVariable {
public:
    RandomVariable() = default;
    explicit RandomVariable(std::vector<double> values);

    static RandomVariable constant(std::size_t n, double c);
    /// Allows -inf entries. Used by the conditional functionals only.
    static RandomVariable extended(std::vector<double> values);

    std::size_t size() const noexcept { return v_.size(); }
    double operator[](Index i) const { return v_[i]; }
    const std::vector<double>& values() const noexcept { return v_; }
    bool is_finite() const;
    double max() const;
    double min() const;

    RandomVariable operator+(const RandomVariable& other) const;
    RandomVariable operator-(const RandomVariable& other) const;
    RandomVariable operator+(double a) const;
    RandomVariable operator*(double lambda) const;
    /// Sup norm of the difference.
    double distance_sup(const RandomVariable& other) const;

    friend bool operator==(const RandomVariable&, const RandomVariable&) = default;

private:
    std::vector<double> v_;
};

/// Disjoint cover of {0..n-1} by nonempty atoms.
class Partition {
public:
    Partition(std::size_t n, std::vector<std::vector<Index>> atoms);

    static Partition trivial(std::size_t n);
    static Partition singletons(std::size_t n);
    /// Atoms are the classes of equal labels; atoms ordered by first appearance.
    static Partition from_labels(std::span<const Index> labels);

    std::size_t space_size() const noexcept { return n_; }
    std::size_t atom_count() const noexcept { return atoms_.size(); }
    const std::vector<std::vector<Index>>& atoms() const noexcept { return atoms_; }
    const std::vector<Index>& atom(Index k) const { return atoms_[k]; }
    Index atom_of(Index outcome) const { return owner_[outcome]; }
    bool is_trivial() const noexcept { return atoms_.size() == 1; }
    bool is_singletons() const noexcept { return atoms_.size() == n_; }

    /// Spreads one value per atom to every outcome of the atom.
    RandomVariable expand(std::span<const double> per_atom) const;
    /// True iff z is constant on every atom.
    bool measurable(const RandomVariable& z, double tol = 1e-12) const;

private:
    std::size_t n_;
    std::vector<std::vector<Index>> atoms_;
    std::vector<Index> owner_;
};

/// Increasing sequence of partitions with a trivial first stage.
class Filtration {
public:
    explicit Filtration(std::vector<Partition> stages);

    std::size_t stage_count() const noexcept { return stages_.size(); }
    std::size_t space_size() const { return stages_.front().space_size(); }
    const Partition& stage(Index t) const { return stages_[t]; }
    const std::vector<Partition>& stages() const noexcept { return stages_; }
    /// Last stage is the singleton partition (the full sigma-algebra).
    bool is_complete() const { return stages_.back().is_singletons(); }

private:
    std::vector<Partition> stages_;
};

/// Sum_i z(i) q(i). Requires q to be a probability and z finite.
double expectation(const RandomVariable& z, const DiscreteMeasure& q);

/// Per-atom conditional mean under q; -inf on atoms with q(atom) = 0.
RandomVariable conditional_expectation(const RandomVariable& z, const DiscreteMeasure& q,
                                       const Partition& g);

/// True iff every atom of `fine` lies inside an atom of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

}  // namespace drmo
