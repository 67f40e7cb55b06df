#pragma once

// Ambiguity sets of probability measures on a finite space and the worst-case
// expectation over them.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "drmo/lp.hpp"
#include "drmo/measure.hpp"
#include "drmo/rng.hpp"

namespace drmo {

/// Convex hull of the listed probability measures.
struct FiniteFamily {
    std::vector<DiscreteMeasure> members;
};

/// Measures with density 0 <= dQ/dP <= 1/(1 - alpha) against the reference P.
struct AvarSet {
    double alpha;
    DiscreteMeasure reference;
};

/// Probability measures on the support grid with E_Q[psi_i] = targets_i.
struct MomentSet {
    FiniteSpace support;
    std::vector<RandomVariable> psi;
    std::vector<double> targets;
};

struct Ball {
    DiscreteMeasure center;
    double radius;
};

/// Order-1 Wasserstein ball around a center on a metric space. Further balls
/// may be listed; the set is then the intersection of all of them.
struct WassersteinBall {
    FiniteSpace space;
    std::vector<Ball> balls;

    const DiscreteMeasure& center() const { return balls.front().center; }
    double radius() const { return balls.front().radius; }
};

enum class AmbiguityKind { FiniteFamily, Avar, Moment, Wasserstein };

std::string to_string(AmbiguityKind kind);

/// The set is described through auxiliary variables v in a polytope given by
/// the constraints and bounds of `system`; the measure is q = map * v.
struct MeasurePolytope {
    lp::LinearProgram system{0};
    std::vector<std::vector<double>> map;  // outcomes x variables

    std::size_t outcome_count() const { return map.size(); }
    std::size_t variable_count() const { return system.variable_count(); }
    /// Linear objective in v equal to sum_i c_i q_i.
    std::vector<double> pull_back(std::span<const double> c) const;
    DiscreteMeasure push_forward(const std::vector<double>& v) const;
};

class AmbiguitySet {
public:
    using Variant = std::variant<FiniteFamily, AvarSet, MomentSet, WassersteinBall>;

    static AmbiguitySet finite_family(std::vector<DiscreteMeasure> members);
    /// Every probability on n outcomes: the family of the n point masses.
    static AmbiguitySet simplex(std::size_t n);
    static AmbiguitySet singleton(DiscreteMeasure p);
    static AmbiguitySet avar(double alpha, DiscreteMeasure reference);
    /// Throws ValidationError when no probability on the support meets the targets.
    static AmbiguitySet moment(FiniteSpace support, std::vector<RandomVariable> psi, std::vector<double> targets);
    static AmbiguitySet wasserstein(DiscreteMeasure center, double radius, FiniteSpace space);
    static AmbiguitySet wasserstein_intersection(FiniteSpace space, std::vector<Ball> balls);

    AmbiguityKind kind() const;
    std::size_t space_size() const noexcept { return n_; }
    const Variant& variant() const noexcept { return v_; }
    template <class T>
    const T& as() const {
        return std::get<T>(v_);
    }

    const MeasurePolytope& polytope() const { return polytope_; }

private:
    AmbiguitySet(Variant v, std::size_t n);

    Variant v_;
    std::size_t n_;
    MeasurePolytope polytope_;
};

struct RobustValue {
    double value;
    DiscreteMeasure argmax;
};

/// sup over Q in M of E_Q[Z] and a maximizing measure.
RobustValue robust_expectation(const AmbiguitySet& m, const RandomVariable& z);

/// Same supremum, always through the generic polytope LP. Used as a second route.
RobustValue robust_expectation_lp(const AmbiguitySet& m, const RandomVariable& z);

struct ReferenceMeasureResult {
    DiscreteMeasure mu;
    DiscreteMeasure normalized;
    /// attained_by[i] is a member of M with Q(i) = mu(i).
    std::vector<DiscreteMeasure> attained_by;
};

/// mu(i) = sup over Q in M of Q(i).
ReferenceMeasureResult reference_measure(const AmbiguitySet& m);

/// A random member of M: a vertex reached by a random linear objective, or a
/// random convex combination of such vertices (and of listed members).
DiscreteMeasure sample_member(const AmbiguitySet& m, Rng& rng);

/// Random (Q, A) pairs; true iff Q(A) <= mu(A) + 1e-9 every time.
bool dominates_all(const ReferenceMeasureResult& result, const AmbiguitySet& m, std::size_t trials, Rng& rng);

struct StrictMonotonicity {
    bool strict;
    /// min over P-positive outcomes i of inf over Q in M of Q(i).
    double epsilon;
    /// The outcome and measure attaining epsilon; a witness with Q(i) = 0 when
    /// not strict.
    Index outcome;
    DiscreteMeasure attained_by;
};

StrictMonotonicity is_strictly_monotone(const AmbiguitySet& m, const DiscreteMeasure& p);

bool contains(const AmbiguitySet& m, const DiscreteMeasure& q, double tol = 1e-7);

/// Extreme points of M when they can be listed at desk scale; nullopt for
/// Wasserstein sets and for enumerations beyond the cap.
std::optional<std::vector<DiscreteMeasure>> enumerate_vertices(const AmbiguitySet& m, std::size_t cap = 200000);

/// Optimal value of the dual of the moment problem,
/// min l0 + b'l  s.t.  l0 + sum_i l_i psi_i(x) >= Z(x) on the support,
/// solved independently of the primal.
double moment_dual_value(const MomentSet& set, const RandomVariable& z);

}  // namespace drmo
