#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "drmo/axioms.hpp"
#include "drmo/cli.hpp"
#include "drmo/conditional.hpp"
#include "drmo/error.hpp"
#include "drmo/verify.hpp"

namespace drmo::cli {
namespace {

struct Global {
    std::uint64_t seed = 42;
    std::size_t trials = 0;
    bool trials_given = false;
    double tolerance = 0.0;
    bool tolerance_given = false;
    std::string format = "json";
    std::string out;
    bool timing = false;
};

/// Report under construction for one command.
class Session {
public:
    explicit Session(const Global& g) : g_(g) {}

    double tol(double fallback) const { return g_.tolerance_given ? g_.tolerance : fallback; }
    const Global& global() const { return g_; }

    Json& results() { return results_; }

    /// Records a check passing when residual <= tolerance.
    void check(const std::string& name, double residual, double tolerance) {
        const bool ok = residual <= tolerance;
        checks_.push_back(Json{{"name", name}, {"passed", ok}, {"residual", number(residual)},
                               {"tolerance", number(tolerance)}});
        passed_ = passed_ && ok;
    }

    void flag(const std::string& name, bool ok) {
        checks_.push_back(Json{{"name", name}, {"passed", ok}});
        passed_ = passed_ && ok;
    }

    void warn(std::string w) { warnings_.push_back(std::move(w)); }
    bool passed() const { return passed_; }

    Json finish(const std::string& command, Json arguments, const std::string& input_digest, double seconds) {
        Json r;
        r["command"] = command;
        r["arguments"] = std::move(arguments);
        if (!input_digest.empty()) r["input_digest"] = input_digest;
        r["results"] = std::move(results_);
        r["checks"] = std::move(checks_);
        if (!warnings_.empty()) r["warnings"] = std::move(warnings_);
        r["passed"] = passed_;
        if (g_.timing) r["time_seconds"] = number(seconds);
        return r;
    }

private:
    const Global& g_;
    Json results_ = Json::object();
    Json checks_ = Json::array();
    Json warnings_ = Json::array();
    bool passed_ = true;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path, "cannot read file");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <class Map>
const typename Map::mapped_type& find(const Map& map, const std::string& name, const char* what) {
    auto it = map.find(name);
    if (it == map.end()) throw InputError("", std::string("unknown ") + what + " '" + name + "'");
    return it->second;
}

Json weights(const DiscreteMeasure& q) { return numbers(q.weights()); }

Json matrix(const std::vector<std::vector<double>>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) out.push_back(numbers(r));
    return out;
}

Json index_rows(const std::vector<std::vector<Index>>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) out.push_back(r);
    return out;
}

void same_size(std::size_t a, std::size_t b, const std::string& what) {
    if (a != b)
        throw InputError("", what + " (" + std::to_string(a) + " vs " + std::to_string(b) + " outcomes)");
}

// ---- eval-static ---------------------------------------------------------

void eval_static(Session& s, const Document& doc, const std::string& rv, const std::string& set) {
    const auto& z = find(doc.variables, rv, "variable").value;
    const auto& m = find(doc.sets, set, "ambiguity set").value;
    same_size(z.size(), m.space_size(), "variable and ambiguity set live on different spaces");
    const auto r = robust_expectation(m, z);
    const auto lp = robust_expectation_lp(m, z);
    s.results()["kind"] = to_string(m.kind());
    s.results()["value"] = number(r.value);
    s.results()["argmax"] = weights(r.argmax);
    s.results()["argmax_expectation"] = number(expectation(z, r.argmax));
    s.results()["lp_value"] = number(lp.value);
    s.check("argmax attains the value", std::abs(expectation(z, r.argmax) - r.value), s.tol(1e-9));
    s.check("polytope LP route agrees", std::abs(lp.value - r.value), s.tol(1e-7));
}

// ---- eval-conditional ----------------------------------------------------

void eval_conditional(Session& s, const Document& doc, const std::string& rv, const std::string& set,
                      const std::string& partition, bool nested_avar, std::optional<double> atom_alpha) {
    const auto& z = find(doc.variables, rv, "variable").value;
    const auto& m = find(doc.sets, set, "ambiguity set").value;
    const auto& g = find(doc.partitions, partition, "partition").value;
    same_size(z.size(), m.space_size(), "variable and ambiguity set live on different spaces");
    same_size(g.space_size(), m.space_size(), "partition and ambiguity set live on different spaces");

    ConditionalValue c{g, {}};
    double level = 0.0;
    if (nested_avar) {
        if (m.kind() != AmbiguityKind::Avar)
            throw InputError("", "--nested-avar needs an avar set, '" + set + "' is " + to_string(m.kind()));
        const auto& a = m.as<AvarSet>();
        AvarSpec spec{atom_alpha.value_or(a.alpha), a.reference};
        spec.validate();
        c = conditional_avar_nested(spec, z, g);
        level = spec.alpha;
    } else {
        c = conditional_robust(m, z, g);
    }
    const bool p = has_property_P(m, g);
    s.results()["method"] = nested_avar ? "nested_avar" : "conditional_robust";
    if (nested_avar) s.results()["atom_alpha"] = number(level);
    s.results()["atoms"] = index_rows(g.atoms());
    s.results()["per_atom"] = numbers(c.per_atom);
    s.results()["per_outcome"] = numbers(c.expanded().values());
    s.results()["te_holds"] = c.te_holds;
    s.results()["property_P"] = p;
    if (nested_avar) return;

    if (p) {
        const auto mx = atom_max(z, g, reference_measure(m).mu);
        double dev = 0.0;
        for (Index k = 0; k < mx.size(); ++k)
            dev = std::max(dev, mx[k] == c.per_atom[k] ? 0.0 : std::abs(mx[k] - c.per_atom[k]));
        s.results()["atom_max"] = numbers(mx);
        s.check("property (P) gives the atom maximum", dev, s.tol(1e-9));
    }
    if (c.te_holds) {
        const auto t = tower_upper_bound_check(m, z, g);
        s.results()["static_value"] = number(t.lhs);
        s.results()["static_of_conditional"] = number(t.rhs);
        s.check("R(Z) <= R(R_G(Z))", t.lhs - t.rhs, s.tol(1e-9));
    } else {
        s.warn("some atom is unreachable by every measure; the tower check is skipped");
    }
}

// ---- eval-composite ------------------------------------------------------

Json stage_tables(const std::vector<std::vector<double>>& tables) { return matrix(tables); }

void composite_on_filtration(Session& s, const Document& doc, const RandomVariable& z, const Filtration& f,
                             const std::string& set) {
    const auto& m = find(doc.sets, set, "ambiguity set").value;
    same_size(z.size(), m.space_size(), "variable and ambiguity set live on different spaces");
    const auto r = composite_functional(m, f, z);
    const auto cmp = composite_dominates_static(m, f, z);
    std::vector<std::vector<double>> stages;
    for (const auto& v : r.stage_values) stages.push_back(v.values());
    s.results()["method"] = "composite";
    s.results()["value"] = number(r.value);
    s.results()["stage_values"] = stage_tables(stages);
    s.results()["static_value"] = number(cmp.lower);
    s.check("R(Z) <= composite value", cmp.lower - cmp.upper, s.tol(1e-9));
}

void composite_rectangular(Session& s, const RectangularSpec& spec, const RandomVariable& z, bool induced) {
    same_size(z.size(), spec.scenario_count(), "variable needs one value per scenario");
    const auto r = rectangular_nested(spec, z);
    const auto st = static_rectangular(spec, z);
    s.results()["method"] = "rectangular";
    s.results()["dims"] = spec.dims();
    s.results()["value"] = number(r.value);
    s.results()["tables"] = stage_tables(r.tables);
    s.results()["static_value"] = number(st.value);
    s.results()["static_heuristic"] = st.heuristic;
    Json marg = Json::array();
    for (const auto& q : st.argmax) marg.push_back(weights(q));
    s.results()["static_argmax"] = std::move(marg);
    s.check("static value <= nested value", st.value - r.value, s.tol(1e-9));
    if (st.heuristic) {
        s.warn("some stage has no vertex list; the static value is a lower estimate and the conditional "
               "composition is not compared");
    } else {
        const auto eq = rectangular_equivalence_check(spec, z);
        s.results()["composite_value"] = number(eq.composite);
        s.check("nested recursion equals conditional composition", std::abs(eq.nested - eq.composite), s.tol(1e-7));
    }
    if (!induced) return;

    const auto set = induced_set(spec);
    const auto verts = *stage_vertices(spec);
    const double m1 = static_cast<double>(verts[0].size());
    const double m2 = static_cast<double>(verts[1].size());
    const double n = static_cast<double>(spec.dims()[0]);
    double best = kNegInf, best_one = kNegInf;
    Json list = Json::array();
    for (const auto& q : set.measures) {
        best = std::max(best, expectation(z, q));
        list.push_back(weights(q));
    }
    for (const auto& q : set.family_one) best_one = std::max(best_one, expectation(z, q));
    Json ind;
    ind["stage_vertex_counts"] = {verts[0].size(), verts[1].size()};
    ind["pre_dedup_count"] = set.pre_dedup_count;
    ind["expected_count"] = number(m1 * std::pow(m2, n));
    ind["distinct_count"] = set.measures.size();
    ind["family_one_count"] = set.family_one.size();
    ind["max_over_induced"] = number(best);
    ind["max_over_family_one"] = number(best_one);
    ind["measures"] = std::move(list);
    s.results()["induced_set"] = std::move(ind);
    s.check("pre-dedup count equals m1 * m2^n", std::abs(static_cast<double>(set.pre_dedup_count) - m1 * std::pow(m2, n)),
            0.0);
    s.check("induced maximum equals the nested value", std::abs(best - r.value), s.tol(1e-9));
    s.check("family-one maximum equals the static value", std::abs(best_one - st.value), s.tol(1e-9));
}

void eval_composite(Session& s, const Document& doc, const std::string& rv, const std::string& spec,
                    const std::string& set, bool induced) {
    const auto& z = find(doc.variables, rv, "variable").value;
    if (auto it = doc.rectangular.find(spec); it != doc.rectangular.end()) {
        if (!set.empty()) throw InputError("", "--set applies to filtrations, '" + spec + "' is a rectangular spec");
        composite_rectangular(s, it->second, z, induced);
        return;
    }
    if (auto it = doc.filtrations.find(spec); it != doc.filtrations.end()) {
        if (set.empty()) throw InputError("", "filtration '" + spec + "' needs --set");
        if (induced) throw InputError("", "--induced-set needs a rectangular spec");
        composite_on_filtration(s, doc, z, it->second, set);
        return;
    }
    throw InputError("", "unknown rectangular spec or filtration '" + spec + "'");
}

// ---- solve ---------------------------------------------------------------

Json policy_json(const Policy& p) { return index_rows(p.actions); }

void solve(Session& s, const Document& doc, const std::string& name, bool enumerate) {
    const auto& prob = find(doc.problems, name, "problem");
    const auto sol = solve_dp(prob);
    Json vf;
    Json sv = Json::array();
    for (const auto& t : sol.values.stage_value) sv.push_back(matrix(t));
    vf["stage_value"] = std::move(sv);
    vf["cost_to_go"] = matrix(sol.values.cost_to_go);
    Json dec = Json::array();
    for (const auto& t : sol.values.decision) dec.push_back(index_rows(t));
    vf["decision"] = std::move(dec);
    s.results()["value"] = number(sol.value);
    s.results()["policy"] = policy_json(sol.policy);
    s.results()["value_functions"] = std::move(vf);
    s.results()["policy_nested_value"] = number(nested_policy_value(prob, sol.policy));
    s.check("Bellman residual", bellman_residual(prob, sol.values), s.tol(1e-9));
    s.check("policy evaluation matches the optimal value",
            std::abs(nested_policy_value(prob, sol.policy) - sol.value), s.tol(1e-9));
    if (!enumerate) return;

    const auto cmp = compare_min_static_vs_min_nested(prob);
    const auto wd = weak_duality_check(prob);
    Json e;
    e["policies"] = cmp.policies;
    e["min_nested"] = number(cmp.min_nested);
    e["min_static"] = number(cmp.min_static);
    e["nested_argmin"] = policy_json(cmp.nested_argmin);
    e["static_argmin"] = policy_json(cmp.static_argmin);
    e["argmins_differ"] = cmp.argmins_differ;
    e["max_min"] = number(wd.max_min);
    e["min_max"] = number(wd.min_max);
    s.results()["enumeration"] = std::move(e);
    s.check("dynamic programming equals enumeration", std::abs(sol.value - cmp.min_nested), s.tol(1e-9));
    s.check("min static <= min nested", cmp.min_static - cmp.min_nested, s.tol(1e-9));
    s.check("max-min <= min-max", wd.max_min - wd.min_max, s.tol(1e-9));
}

// ---- wasserstein ---------------------------------------------------------

void wasserstein(Session& s, const Document& doc, const std::string& p_name, const std::string& q_name,
                 const std::string& rv) {
    const auto& p = find(doc.measures, p_name, "measure");
    const auto& q = find(doc.measures, q_name, "measure");
    if (p.space != q.space)
        throw InputError("", "measures '" + p_name + "' and '" + q_name + "' live on different spaces");
    const auto& space = doc.spaces.at(p.space);
    if (!space.has_metric()) throw InputError("", "space '" + p.space + "' has no metric");
    const auto w = wasserstein_1(p.value, q.value, space);
    s.results()["distance"] = number(w.distance);
    s.results()["plan"] = matrix(w.plan.pi);
    s.results()["potential"] = numbers(w.potential);
    s.results()["dual_value"] = number(w.dual);
    double marg = 0.0;
    const auto rows = w.plan.row_sums(), cols = w.plan.column_sums();
    for (Index i = 0; i < rows.size(); ++i)
        marg = std::max({marg, std::abs(rows[i] - p.value[i]), std::abs(cols[i] - q.value[i])});
    s.check("plan marginals", marg, s.tol(1e-9));
    s.check("primal equals dual", std::abs(w.distance - w.dual), s.tol(1e-7));
    if (rv.empty()) return;

    const auto& z = find(doc.variables, rv, "variable").value;
    same_size(z.size(), space.size(), "variable and measures live on different spaces");
    const auto kr = kr_bound_check(p.value, q.value, space, z);
    s.results()["kr"] = Json{{"lhs", number(kr.lhs)},
                             {"rhs", number(kr.rhs)},
                             {"lipschitz", number(kr.lipschitz)},
                             {"vacuous", kr.vacuous}};
    if (kr.vacuous)
        s.warn("the variable differs on two outcomes at distance zero; the bound is vacuous");
    else
        s.check("|E_Q Z - E_P Z| <= L_Z d(P, Q)", kr.lhs - kr.rhs, s.tol(1e-9));
}

// ---- bounds --------------------------------------------------------------

std::string csv_sweep(const BallGapSweep& sweep) {
    std::string out = "epsilon,gap,bound,holds\n";
    for (const auto& r : sweep.rows)
        out += number(r.epsilon).dump() + "," + number(r.gap).dump() + "," + number(r.bound).dump() + "," +
               (r.holds ? "true" : "false") + "\n";
    return out;
}

void bounds(Session& s, const Document& doc, const std::string& name, std::string* csv) {
    const auto& b = find(doc.bounds, name, "bound spec");
    if (b.ball) {
        const auto& spec = *b.ball;
        const auto sweep = ball_gap_sweep(spec.center, spec.epsilons, doc.spaces.at(spec.space), spec.z);
        Json rows = Json::array();
        double worst = kNegInf;
        for (const auto& r : sweep.rows) {
            rows.push_back(Json{{"epsilon", number(r.epsilon)},
                                {"gap", number(r.gap)},
                                {"bound", number(r.bound)},
                                {"holds", r.holds}});
            worst = std::max(worst, r.gap - r.bound);
        }
        const bool vacuous = !sweep.rows.empty() && sweep.rows.front().vacuous;
        s.results()["kind"] = "ball";
        s.results()["lipschitz"] = number(sweep.rows.empty() ? 0.0 : sweep.rows.front().lipschitz);
        s.results()["expectation"] = number(expectation(spec.z, spec.center));
        s.results()["max_value"] = number(spec.z.max());
        s.results()["sweep"] = std::move(rows);
        s.results()["monotone"] = sweep.monotone;
        if (vacuous)
            s.warn("the variable differs on two outcomes at distance zero; the bound is vacuous");
        else if (!sweep.rows.empty())
            s.check("gap <= L_Z * epsilon on the whole sweep", worst, s.tol(1e-9));
        s.flag("gap nondecreasing in epsilon", sweep.monotone);
        if (csv) *csv = csv_sweep(sweep);
        return;
    }
    if (csv) throw InputError("", "--csv applies to ball sweeps only");
    const auto& m = *b.multistage;
    const double bound = multistage_bound(m.bound);
    const double flat = stagewise_bound(m.bound);
    s.results()["kind"] = "multistage";
    s.results()["bound"] = number(bound);
    s.results()["stagewise_bound"] = number(flat);
    const bool independent = std::all_of(m.bound.kappa.begin(), m.bound.kappa.end(), [](double k) { return k == 0.0; });
    if (independent) s.check("kappa = 0 reduces to the stagewise bound", std::abs(bound - flat), 0.0);
    if (!m.model) return;
    const auto c = multistage_bound_empirical_check(*m.model, m.bound, *m.z);
    s.results()["nested"] = number(c.nested);
    s.results()["reference"] = number(c.reference);
    s.results()["gap"] = number(c.gap);
    s.check("nested gap <= multistage bound", c.gap - c.bound, s.tol(1e-7));
}

// ---- verify --------------------------------------------------------------

void verify_builtin(Session& s) {
    verify::Options o;
    o.seed = s.global().seed;
    if (s.global().trials_given) o.trials = s.global().trials;
    if (s.global().tolerance_given) s.warn("--tolerance does not apply to the builtin battery");
    Json rows = Json::array();
    std::size_t passed = 0;
    for (const auto& r : verify::run_all(o)) {
        rows.push_back(Json{{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"trials", r.trials},
                            {"residual", number(r.residual)},
                            {"tolerance", number(r.tolerance)},
                            {"detail", r.detail}});
        for (const auto& w : r.warnings) s.warn("[" + std::to_string(r.id) + "] " + w);
        s.flag("criterion " + std::to_string(r.id), r.passed);
        passed += r.passed ? 1 : 0;
    }
    s.results()["criteria"] = std::move(rows);
    s.results()["passed_count"] = passed;
    s.results()["criterion_count"] = verify::kCriterionCount;
}

void verify_file(Session& s, const Document& doc) {
    Rng root(s.global().seed);
    const std::size_t trials = s.global().trials_given ? s.global().trials : 100;
    if (trials == 0) s.warn("no randomized trials ran; the axiom checks pass vacuously");
    Json sets = Json::object();
    for (const auto& [name, m] : doc.sets) {
        Rng rng = root.fork();
        const auto ax = check_axioms(m.value, trials, rng);
        const auto ref = reference_measure(m.value);
        const bool dom = dominates_all(ref, m.value, 1000, rng);
        sets[name] = Json{{"kind", to_string(m.value.kind())},
                          {"axiom_worst", number(ax.worst())},
                          {"reference_measure", weights(ref.mu)}};
        s.check("axioms of set '" + name + "'", ax.worst(), s.tol(1e-7));
        s.flag("reference measure of set '" + name + "' dominates", dom);
    }
    s.results()["sets"] = std::move(sets);

    Json problems = Json::object();
    for (const auto& [name, prob] : doc.problems) {
        if (policy_count(prob) > static_cast<double>(kPolicyCap)) {
            s.warn("problem '" + name + "' has too many policies to enumerate; skipped");
            continue;
        }
        const auto cmp = compare_min_static_vs_min_nested(prob);
        problems[name] = Json{{"dp_value", number(cmp.dp_value)},
                              {"min_nested", number(cmp.min_nested)},
                              {"min_static", number(cmp.min_static)}};
        s.check("problem '" + name + "' DP equals enumeration", std::abs(cmp.dp_value - cmp.min_nested), s.tol(1e-9));
        s.check("problem '" + name + "' min static <= min nested", cmp.min_static - cmp.min_nested, s.tol(1e-9));
    }
    s.results()["problems"] = std::move(problems);

    for (const auto& [name, b] : doc.bounds) {
        if (b.ball) {
            const auto sweep = ball_gap_sweep(b.ball->center, b.ball->epsilons, doc.spaces.at(b.ball->space), b.ball->z);
            s.flag("ball bound '" + name + "' holds on the sweep", sweep.all_hold);
        } else if (b.multistage->model) {
            const auto c = multistage_bound_empirical_check(*b.multistage->model, b.multistage->bound, *b.multistage->z);
            s.check("multistage bound '" + name + "'", c.gap - c.bound, s.tol(1e-7));
        }
    }
}

void emit(const Json& report, const Global& g, std::ostream& out) {
    const std::string body = g.format == "text" ? render_text(report) : report.dump(2) + "\n";
    if (g.out.empty()) {
        out << body;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw InputError(g.out, "cannot write file");
    f << body;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributionally robust risk functionals on finite spaces.", "drmo"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "RNG seed for randomized checks")->capture_default_str();
    auto* trials_opt = app.add_option("--trials", g.trials, "override the trial count of randomized batteries");
    auto* tol_opt = app.add_option("--tolerance", g.tolerance, "override the tolerance of the report's checks");
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_option("--out", g.out, "write the report to this path instead of stdout");
    app.add_flag("--timing", g.timing, "include wall-clock time in the report");

    std::string file, a, b, c, set, rv, csv;
    bool nested_avar = false, induced = false, enumerate = false, builtin = false;

    auto* st = app.add_subcommand("eval-static", "worst-case expectation and a maximizing measure");
    st->add_option("file", file, "problem file")->required();
    st->add_option("variable", a, "random variable")->required();
    st->add_option("set", b, "ambiguity set")->required();

    auto* cond = app.add_subcommand("eval-conditional", "conditional worst case on the atoms of a partition");
    cond->add_option("file", file, "problem file")->required();
    cond->add_option("variable", a, "random variable")->required();
    cond->add_option("set", b, "ambiguity set")->required();
    cond->add_option("partition", c, "partition")->required();
    cond->add_flag("--nested-avar", nested_avar, "AVaR under each atom's conditional law instead");
    double atom_alpha = 0.0;
    auto* atom_alpha_opt =
        cond->add_option("--atom-alpha", atom_alpha, "level of the per-atom AVaR (default: the set's alpha)");

    auto* comp = app.add_subcommand("eval-composite", "composite value along a filtration or rectangular spec");
    comp->add_option("file", file, "problem file")->required();
    comp->add_option("variable", a, "random variable")->required();
    comp->add_option("spec", b, "rectangular spec, or filtration together with --set")->required();
    comp->add_option("--set", set, "ambiguity set for a filtration");
    comp->add_flag("--induced-set", induced, "enumerate the two-stage induced set");

    auto* sol = app.add_subcommand("solve", "backward induction for a multistage problem");
    sol->add_option("file", file, "problem file")->required();
    sol->add_option("problem", a, "problem")->required();
    sol->add_flag("--enumerate", enumerate, "compare with exhaustive policy enumeration");

    auto* w1 = app.add_subcommand("wasserstein", "order-1 Wasserstein distance and optimal plan");
    w1->add_option("file", file, "problem file")->required();
    w1->add_option("from", a, "first measure")->required();
    w1->add_option("to", b, "second measure")->required();
    w1->add_option("--rv", rv, "random variable for the Kantorovich-Rubinstein check");

    auto* bd = app.add_subcommand("bounds", "Lipschitz bounds for Wasserstein ambiguity");
    bd->add_option("file", file, "problem file")->required();
    bd->add_option("spec", a, "bound spec")->required();
    bd->add_option("--csv", csv, "write the epsilon sweep as CSV to this path ('-' for stdout)");

    auto* ver = app.add_subcommand("verify", "run the invariant battery");
    ver->add_option("file", file, "problem file whose entries are checked");
    ver->add_flag("--builtin", builtin, "run the builtin battery on generated instances and witnesses");

    for (auto* sub : {st, cond, comp, sol, w1, bd, ver}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }
    g.trials_given = trials_opt->count() > 0;
    g.tolerance_given = tol_opt->count() > 0;

    const auto start = std::chrono::steady_clock::now();
    Session s(g);
    Json arguments;
    std::string input_digest;
    std::string command;
    std::string csv_text;
    try {
        if (ver->parsed() && builtin == !file.empty())
            throw InputError("", "verify needs either a file or --builtin");
        if (g.tolerance_given && !(g.tolerance >= 0)) throw InputError("", "--tolerance must be nonnegative");
        Document doc;
        if (!file.empty()) {
            const auto bytes = read_file(file);
            input_digest = digest(bytes);
            try {
                doc = parse_document(bytes);
            } catch (const InputError& e) {
                throw InputError(file + ":" + e.where(), e.message());
            }
            arguments["file"] = file;
        }
        if (st->parsed()) {
            command = "eval-static";
            arguments["variable"] = a;
            arguments["set"] = b;
            eval_static(s, doc, a, b);
        } else if (cond->parsed()) {
            command = "eval-conditional";
            arguments["variable"] = a;
            arguments["set"] = b;
            arguments["partition"] = c;
            arguments["nested_avar"] = nested_avar;
            if (atom_alpha_opt->count() > 0) {
                if (!nested_avar) throw InputError("", "--atom-alpha applies with --nested-avar only");
                arguments["atom_alpha"] = number(atom_alpha);
            }
            eval_conditional(s, doc, a, b, c, nested_avar,
                             atom_alpha_opt->count() > 0 ? std::optional<double>(atom_alpha) : std::nullopt);
        } else if (comp->parsed()) {
            command = "eval-composite";
            arguments["variable"] = a;
            arguments["spec"] = b;
            if (!set.empty()) arguments["set"] = set;
            arguments["induced_set"] = induced;
            eval_composite(s, doc, a, b, set, induced);
        } else if (sol->parsed()) {
            command = "solve";
            arguments["problem"] = a;
            arguments["enumerate"] = enumerate;
            solve(s, doc, a, enumerate);
        } else if (w1->parsed()) {
            command = "wasserstein";
            arguments["from"] = a;
            arguments["to"] = b;
            if (!rv.empty()) arguments["variable"] = rv;
            wasserstein(s, doc, a, b, rv);
        } else if (bd->parsed()) {
            command = "bounds";
            arguments["spec"] = a;
            bounds(s, doc, a, csv.empty() ? nullptr : &csv_text);
        } else {
            command = "verify";
            arguments["builtin"] = builtin;
            arguments["seed"] = g.seed;
            if (g.trials_given) arguments["trials"] = g.trials;
            if (builtin)
                verify_builtin(s);
            else
                verify_file(s, doc);
        }
        if (g.tolerance_given) arguments["tolerance"] = number(g.tolerance);

        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const Json report = s.finish(command, std::move(arguments), input_digest, secs);
        if (!csv.empty()) {
            if (csv == "-") {
                out << csv_text;
                if (!g.out.empty()) emit(report, g, out);
            } else {
                std::ofstream f(csv, std::ios::binary);
                if (!f) throw InputError(csv, "cannot write file");
                f << csv_text;
                emit(report, g, out);
            }
        } else {
            emit(report, g, out);
        }
        return s.passed() ? kExitOk : kExitCheckFailed;
    } catch (const InputError& e) {
        err << "drmo: input error: " << e.what() << "\n";
    } catch (const ValidationError& e) {
        err << "drmo: invalid input: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
        err << "drmo: not applicable: " << e.what() << "\n";
    } catch (const CapExceededError& e) {
        err << "drmo: too large: " << e.what() << "\n";
    } catch (const UnreachableAtomError& e) {
        err << "drmo: unreachable atom: " << e.what() << "\n";
    }
    return kExitInputError;
}

}  // namespace drmo::cli
