#include <algorithm>
#include <cmath>
#include <set>

#include "drmo/cli.hpp"
#include "drmo/error.hpp"

namespace drmo::cli {
namespace {

std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + escape(key); }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    // byte is 1-based and may point one past the end of the input.
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class Loader {
public:
    explicit Loader(const Json& root) : root_(root) {}

    Document load() {
        expect_object(root_, "");
        static const std::set<std::string> known{"version",    "spaces",      "measures", "variables",
                                                 "sets",       "partitions",  "filtrations", "rectangular",
                                                 "problems",   "models",      "bounds"};
        for (const auto& [key, _] : root_.items())
            if (!known.contains(key)) fail(child("", key), "unknown section '" + key + "'");
        if (!root_.contains("version")) fail("", "missing 'version'");
        if (!root_["version"].is_number_integer() || root_["version"].get<int>() != 1)
            fail("/version", "only version 1 is supported");

        each("spaces", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.spaces.emplace(name, space(v, ptr));
        });
        each("measures", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.measures.emplace(name, measure_entry(v, ptr));
        });
        each("variables", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.variables.emplace(name, variable_entry(v, ptr));
        });
        each("partitions", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.partitions.emplace(name, partition(v, ptr));
        });
        each("filtrations", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.filtrations.emplace(name, filtration(v, ptr));
        });
        each("sets", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.sets.emplace(name, ambiguity(v, ptr));
        });
        each("rectangular", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.rectangular.emplace(name, rectangular(v, ptr));
        });
        each("problems", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.problems.emplace(name, problem(v, ptr));
        });
        each("models", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.models.emplace(name, model(v, ptr));
        });
        each("bounds", [&](const std::string& name, const Json& v, const std::string& ptr) {
            doc_.bounds.emplace(name, bound(v, ptr));
        });
        return std::move(doc_);
    }

private:
    const Json& root_;
    Document doc_;

    [[noreturn]] static void fail(const std::string& ptr, const std::string& message) {
        throw InputError(ptr.empty() ? "/" : ptr, message);
    }

    template <class F>
    void each(const char* section, F&& f) {
        if (!root_.contains(section)) return;
        const std::string ptr = child("", section);
        const Json& block = root_[section];
        expect_object(block, ptr);
        for (const auto& [name, v] : block.items()) {
            const std::string at = child(ptr, name);
            // Module constructors validate their own invariants; report those
            // at the entry that produced them.
            try {
                f(name, v, at);
            } catch (const InputError&) {
                throw;
            } catch (const std::exception& e) {
                fail(at, e.what());
            }
        }
    }

    static void expect_object(const Json& v, const std::string& ptr) {
        if (!v.is_object()) fail(ptr, "expected an object");
    }

    static const Json& field(const Json& obj, const std::string& ptr, const char* key) {
        expect_object(obj, ptr);
        if (!obj.contains(key)) fail(ptr, std::string("missing '") + key + "'");
        return obj[key];
    }

    static const Json* optional_field(const Json& obj, const char* key) {
        return obj.contains(key) ? &obj[key] : nullptr;
    }

    static void allow_only(const Json& obj, const std::string& ptr, std::initializer_list<const char*> keys) {
        for (const auto& [key, _] : obj.items())
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
                fail(child(ptr, key), "unknown field '" + key + "'");
    }

    static double real(const Json& v, const std::string& ptr) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf") return kInf;
            if (s == "-inf") return kNegInf;
        }
        fail(ptr, "expected a number");
    }

    static double finite(const Json& v, const std::string& ptr) {
        const double x = real(v, ptr);
        if (!std::isfinite(x)) fail(ptr, "expected a finite number");
        return x;
    }

    static std::size_t count(const Json& v, const std::string& ptr) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            fail(ptr, "expected a nonnegative integer");
        return v.get<std::size_t>();
    }

    static bool flag(const Json& v, const std::string& ptr) {
        if (!v.is_boolean()) fail(ptr, "expected true or false");
        return v.get<bool>();
    }

    static std::string text(const Json& v, const std::string& ptr) {
        if (!v.is_string()) fail(ptr, "expected a name");
        return v.get<std::string>();
    }

    static const Json& array(const Json& v, const std::string& ptr) {
        if (!v.is_array()) fail(ptr, "expected an array");
        return v;
    }

    static std::vector<double> reals(const Json& v, const std::string& ptr) {
        std::vector<double> out;
        for (std::size_t i = 0; i < array(v, ptr).size(); ++i) out.push_back(finite(v[i], child(ptr, i)));
        return out;
    }

    static std::vector<Index> indices(const Json& v, const std::string& ptr) {
        std::vector<Index> out;
        for (std::size_t i = 0; i < array(v, ptr).size(); ++i) out.push_back(count(v[i], child(ptr, i)));
        return out;
    }

    template <class Map>
    static const typename Map::mapped_type& lookup(const Map& map, const std::string& name, const char* what,
                                                   const std::string& ptr) {
        auto it = map.find(name);
        if (it == map.end()) fail(ptr, std::string("unknown ") + what + " '" + name + "'");
        return it->second;
    }

    const FiniteSpace& space_ref(const Json& v, const std::string& ptr) const {
        return lookup(doc_.spaces, text(v, ptr), "space", ptr);
    }

    static void same_space(const std::string& expected, const std::string& actual, const std::string& ptr) {
        if (!expected.empty() && !actual.empty() && expected != actual)
            fail(ptr, "lives on space '" + actual + "' but '" + expected + "' is required here");
    }

    static void size_matches(std::size_t got, std::size_t want, const std::string& ptr) {
        if (got != want)
            fail(ptr, "has " + std::to_string(got) + " entries but the space has " + std::to_string(want));
    }

    /// A measure given by name or inline as a weight array on `space`.
    Typed<DiscreteMeasure> measure_ref(const Json& v, const std::string& ptr, const std::string& space) const {
        if (v.is_string()) {
            const auto& m = lookup(doc_.measures, v.get<std::string>(), "measure", ptr);
            same_space(space, m.space, ptr);
            return m;
        }
        Typed<DiscreteMeasure> m{DiscreteMeasure(reals(v, ptr)), space};
        if (!space.empty()) size_matches(m.value.size(), doc_.spaces.at(space).size(), ptr);
        return m;
    }

    Typed<RandomVariable> variable_ref(const Json& v, const std::string& ptr, const std::string& space) const {
        if (v.is_string()) {
            const auto& z = lookup(doc_.variables, v.get<std::string>(), "variable", ptr);
            same_space(space, z.space, ptr);
            if (!space.empty()) size_matches(z.value.size(), doc_.spaces.at(space).size(), ptr);
            return z;
        }
        Typed<RandomVariable> z{RandomVariable(reals(v, ptr)), space};
        if (!space.empty()) size_matches(z.value.size(), doc_.spaces.at(space).size(), ptr);
        return z;
    }

    std::string space_name(const Json& obj, const std::string& ptr, const char* key = "space") const {
        const auto name = text(field(obj, ptr, key), child(ptr, key));
        lookup(doc_.spaces, name, "space", child(ptr, key));
        return name;
    }

    FiniteSpace space(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"size", "labels", "points", "metric"});
        std::optional<std::size_t> n;
        std::vector<std::string> labels;
        std::optional<Metric> metric;
        auto set_size = [&](std::size_t k, const std::string& at) {
            if (n && *n != k) fail(at, "disagrees with the size " + std::to_string(*n));
            n = k;
        };
        if (auto* s = optional_field(v, "size")) set_size(count(*s, child(ptr, "size")), child(ptr, "size"));
        if (auto* l = optional_field(v, "labels")) {
            const auto at = child(ptr, "labels");
            for (std::size_t i = 0; i < array(*l, at).size(); ++i) labels.push_back(text((*l)[i], child(at, i)));
            set_size(labels.size(), at);
        }
        if (v.contains("points") && v.contains("metric")) fail(ptr, "give either 'points' or 'metric', not both");
        if (auto* p = optional_field(v, "points")) {
            const auto pts = reals(*p, child(ptr, "points"));
            set_size(pts.size(), child(ptr, "points"));
            metric = Metric::line(pts);
        }
        if (auto* d = optional_field(v, "metric")) {
            const auto at = child(ptr, "metric");
            std::vector<std::vector<double>> table;
            for (std::size_t i = 0; i < array(*d, at).size(); ++i) table.push_back(reals((*d)[i], child(at, i)));
            set_size(table.size(), at);
            try {
                metric = Metric(std::move(table));
            } catch (const std::exception& e) {
                fail(at, e.what());
            }
        }
        if (!n) fail(ptr, "needs one of 'size', 'labels', 'points' or 'metric'");
        return FiniteSpace(*n, std::move(labels), std::move(metric));
    }

    Typed<DiscreteMeasure> measure_entry(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"space", "weights", "uniform", "dirac"});
        const auto s = space_name(v, ptr);
        const std::size_t n = doc_.spaces.at(s).size();
        const int given = int(v.contains("weights")) + int(v.contains("uniform")) + int(v.contains("dirac"));
        if (given != 1) fail(ptr, "needs exactly one of 'weights', 'uniform' or 'dirac'");
        if (auto* u = optional_field(v, "uniform")) {
            if (!flag(*u, child(ptr, "uniform"))) fail(child(ptr, "uniform"), "must be true when given");
            return {DiscreteMeasure::uniform(n), s};
        }
        if (auto* d = optional_field(v, "dirac")) {
            const auto at = count(*d, child(ptr, "dirac"));
            if (at >= n) fail(child(ptr, "dirac"), "outcome out of range");
            return {DiscreteMeasure::dirac(n, at), s};
        }
        auto m = measure_ref(v["weights"], child(ptr, "weights"), s);
        if (!m.value.is_probability()) fail(ptr, "weights must sum to 1");
        return m;
    }

    Typed<RandomVariable> variable_entry(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"space", "values"});
        std::string s;
        if (v.contains("space")) s = space_name(v, ptr);
        return variable_ref(field(v, ptr, "values"), child(ptr, "values"), s);
    }

    Typed<Partition> partition(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"space", "atoms", "labels", "trivial", "singletons"});
        const auto s = space_name(v, ptr);
        const std::size_t n = doc_.spaces.at(s).size();
        const int given = int(v.contains("atoms")) + int(v.contains("labels")) + int(v.contains("trivial")) +
                          int(v.contains("singletons"));
        if (given != 1) fail(ptr, "needs exactly one of 'atoms', 'labels', 'trivial' or 'singletons'");
        if (auto* t = optional_field(v, "trivial")) {
            if (!flag(*t, child(ptr, "trivial"))) fail(child(ptr, "trivial"), "must be true when given");
            return {Partition::trivial(n), s};
        }
        if (auto* t = optional_field(v, "singletons")) {
            if (!flag(*t, child(ptr, "singletons"))) fail(child(ptr, "singletons"), "must be true when given");
            return {Partition::singletons(n), s};
        }
        if (auto* l = optional_field(v, "labels")) {
            const auto labels = indices(*l, child(ptr, "labels"));
            size_matches(labels.size(), n, child(ptr, "labels"));
            return {Partition::from_labels(labels), s};
        }
        const auto at = child(ptr, "atoms");
        const Json& atoms = array(v["atoms"], at);
        std::vector<std::vector<Index>> list;
        for (std::size_t i = 0; i < atoms.size(); ++i) list.push_back(indices(atoms[i], child(at, i)));
        return {Partition(n, std::move(list)), s};
    }

    Filtration filtration(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"stages"});
        const auto at = child(ptr, "stages");
        const Json& stages = array(field(v, ptr, "stages"), at);
        if (stages.empty()) fail(at, "needs at least one stage");
        std::vector<Partition> parts;
        std::string s;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            const auto& g = lookup(doc_.partitions, text(stages[i], child(at, i)), "partition", child(at, i));
            if (i == 0) s = g.space;
            same_space(s, g.space, child(at, i));
            parts.push_back(g.value);
        }
        return Filtration(std::move(parts));
    }

    Typed<AmbiguitySet> ambiguity(const Json& v, const std::string& ptr) {
        const auto kind = text(field(v, ptr, "kind"), child(ptr, "kind"));
        if (kind == "finite_family") {
            allow_only(v, ptr, {"kind", "space", "members", "simplex"});
            const auto s = space_name(v, ptr);
            if (v.contains("simplex") == v.contains("members"))
                fail(ptr, "needs exactly one of 'members' or 'simplex'");
            if (auto* f = optional_field(v, "simplex")) {
                if (!flag(*f, child(ptr, "simplex"))) fail(child(ptr, "simplex"), "must be true when given");
                return {AmbiguitySet::simplex(doc_.spaces.at(s).size()), s};
            }
            const auto at = child(ptr, "members");
            const Json& members = array(v["members"], at);
            std::vector<DiscreteMeasure> list;
            for (std::size_t i = 0; i < members.size(); ++i) list.push_back(measure_ref(members[i], child(at, i), s).value);
            return {AmbiguitySet::finite_family(std::move(list)), s};
        }
        if (kind == "avar") {
            allow_only(v, ptr, {"kind", "space", "alpha", "reference"});
            std::string s;
            if (v.contains("space")) s = space_name(v, ptr);
            const double alpha = finite(field(v, ptr, "alpha"), child(ptr, "alpha"));
            const auto& ref = field(v, ptr, "reference");
            if (s.empty() && !ref.is_string()) fail(ptr, "an inline reference needs 'space'");
            auto p = measure_ref(ref, child(ptr, "reference"), s);
            return {AmbiguitySet::avar(alpha, p.value), p.space};
        }
        if (kind == "moment") {
            allow_only(v, ptr, {"kind", "support", "psi", "targets"});
            const auto s = space_name(v, ptr, "support");
            const auto at = child(ptr, "psi");
            const Json& psi = array(field(v, ptr, "psi"), at);
            std::vector<RandomVariable> list;
            for (std::size_t i = 0; i < psi.size(); ++i) list.push_back(variable_ref(psi[i], child(at, i), s).value);
            const auto targets = reals(field(v, ptr, "targets"), child(ptr, "targets"));
            if (targets.size() != list.size()) fail(child(ptr, "targets"), "needs one target per moment function");
            return {AmbiguitySet::moment(doc_.spaces.at(s), std::move(list), targets), s};
        }
        if (kind == "wasserstein") {
            allow_only(v, ptr, {"kind", "space", "center", "radius", "balls"});
            const auto s = space_name(v, ptr);
            const FiniteSpace& space = doc_.spaces.at(s);
            if (!space.has_metric()) fail(child(ptr, "space"), "space '" + s + "' has no metric");
            if (v.contains("balls")) {
                if (v.contains("center") || v.contains("radius"))
                    fail(ptr, "give either 'balls' or 'center' and 'radius'");
                const auto at = child(ptr, "balls");
                const Json& balls = array(v["balls"], at);
                std::vector<Ball> list;
                for (std::size_t i = 0; i < balls.size(); ++i) {
                    const auto b = child(at, i);
                    allow_only(balls[i], b, {"center", "radius"});
                    list.push_back({measure_ref(field(balls[i], b, "center"), child(b, "center"), s).value,
                                    finite(field(balls[i], b, "radius"), child(b, "radius"))});
                }
                return {AmbiguitySet::wasserstein_intersection(space, std::move(list)), s};
            }
            auto center = measure_ref(field(v, ptr, "center"), child(ptr, "center"), s);
            return {AmbiguitySet::wasserstein(center.value, finite(field(v, ptr, "radius"), child(ptr, "radius")), space),
                    s};
        }
        fail(child(ptr, "kind"), "unknown kind '" + kind + "' (expected finite_family, avar, moment or wasserstein)");
    }

    const AmbiguitySet& set_ref(const Json& v, const std::string& ptr) const {
        return lookup(doc_.sets, text(v, ptr), "ambiguity set", ptr).value;
    }

    RectangularSpec rectangular(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"stages"});
        const auto at = child(ptr, "stages");
        const Json& stages = array(field(v, ptr, "stages"), at);
        RectangularSpec spec;
        for (std::size_t i = 0; i < stages.size(); ++i) spec.stages.push_back(set_ref(stages[i], child(at, i)));
        spec.validate();
        return spec;
    }

    MultistageProblem problem(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"outcomes", "actions", "cost", "allowed", "sets"});
        MultistageProblem p;
        for (const char* key : {"outcomes", "actions"}) {
            const auto at = child(ptr, key);
            std::vector<std::size_t> list;
            for (std::size_t i = 0; i < array(field(v, ptr, key), at).size(); ++i)
                list.push_back(count(v[key][i], child(at, i)));
            (std::string(key) == "outcomes" ? p.outcomes : p.actions) = std::move(list);
        }
        const auto cost_at = child(ptr, "cost");
        const Json& cost = array(field(v, ptr, "cost"), cost_at);
        for (std::size_t t = 0; t < cost.size(); ++t) {
            const auto at = child(cost_at, t);
            std::vector<std::vector<double>> stage;
            for (std::size_t x = 0; x < array(cost[t], at).size(); ++x) stage.push_back(reals(cost[t][x], child(at, x)));
            p.cost.push_back(std::move(stage));
        }
        const auto allowed_at = child(ptr, "allowed");
        const Json& allowed = array(field(v, ptr, "allowed"), allowed_at);
        for (std::size_t t = 0; t < allowed.size(); ++t) {
            const auto at = child(allowed_at, t);
            std::vector<std::vector<std::vector<Index>>> stage;
            for (std::size_t x = 0; x < array(allowed[t], at).size(); ++x) {
                const auto row_at = child(at, x);
                std::vector<std::vector<Index>> row;
                for (std::size_t k = 0; k < array(allowed[t][x], row_at).size(); ++k)
                    row.push_back(indices(allowed[t][x][k], child(row_at, k)));
                stage.push_back(std::move(row));
            }
            p.allowed.push_back(std::move(stage));
        }
        const auto sets_at = child(ptr, "sets");
        const Json& sets = array(field(v, ptr, "sets"), sets_at);
        for (std::size_t t = 0; t < sets.size(); ++t) {
            if (sets[t].is_null())
                p.sets.emplace_back(std::nullopt);
            else
                p.sets.emplace_back(set_ref(sets[t], child(sets_at, t)));
        }
        p.validate();
        return p;
    }

    TransitionModel model(const Json& v, const std::string& ptr) {
        allow_only(v, ptr, {"stages", "transitions"});
        TransitionModel m;
        const auto stages_at = child(ptr, "stages");
        const Json& stages = array(field(v, ptr, "stages"), stages_at);
        std::vector<std::string> names;
        for (std::size_t t = 0; t < stages.size(); ++t) {
            names.push_back(text(stages[t], child(stages_at, t)));
            m.stages.push_back(space_ref(stages[t], child(stages_at, t)));
        }
        const auto tr_at = child(ptr, "transitions");
        const Json& tr = array(field(v, ptr, "transitions"), tr_at);
        if (tr.size() != names.size()) fail(tr_at, "needs one list of transitions per stage");
        for (std::size_t t = 0; t < tr.size(); ++t) {
            const auto at = child(tr_at, t);
            std::vector<DiscreteMeasure> list;
            for (std::size_t h = 0; h < array(tr[t], at).size(); ++h)
                list.push_back(measure_ref(tr[t][h], child(at, h), names[t]).value);
            m.transitions.push_back(std::move(list));
        }
        m.validate();
        return m;
    }

    BoundEntry bound(const Json& v, const std::string& ptr) {
        const auto kind = text(field(v, ptr, "kind"), child(ptr, "kind"));
        BoundEntry entry;
        if (kind == "ball") {
            allow_only(v, ptr, {"kind", "space", "center", "variable", "epsilons", "steps"});
            const auto s = space_name(v, ptr);
            if (!doc_.spaces.at(s).has_metric()) fail(child(ptr, "space"), "space '" + s + "' has no metric");
            BallSweepSpec b;
            b.space = s;
            b.center = measure_ref(field(v, ptr, "center"), child(ptr, "center"), s).value;
            b.z = variable_ref(field(v, ptr, "variable"), child(ptr, "variable"), s).value;
            if (v.contains("epsilons") && v.contains("steps")) fail(ptr, "give either 'epsilons' or 'steps'");
            if (auto* e = optional_field(v, "epsilons")) {
                b.epsilons = reals(*e, child(ptr, "epsilons"));
                for (std::size_t i = 0; i < b.epsilons.size(); ++i)
                    if (b.epsilons[i] < 0) fail(child(child(ptr, "epsilons"), i), "radius must be nonnegative");
            } else {
                std::size_t steps = 10;
                if (auto* st = optional_field(v, "steps")) steps = count(*st, child(ptr, "steps"));
                if (steps == 0) fail(child(ptr, "steps"), "needs at least one step");
                b.epsilons = epsilon_grid(doc_.spaces.at(s), steps);
            }
            entry.ball = std::move(b);
            return entry;
        }
        if (kind == "multistage") {
            allow_only(v, ptr, {"kind", "epsilon", "kappa", "weights", "lipschitz", "model", "variable"});
            MultistageSpec m;
            m.bound.epsilon = reals(field(v, ptr, "epsilon"), child(ptr, "epsilon"));
            m.bound.kappa = reals(field(v, ptr, "kappa"), child(ptr, "kappa"));
            m.bound.weights = reals(field(v, ptr, "weights"), child(ptr, "weights"));
            m.bound.lipschitz = finite(field(v, ptr, "lipschitz"), child(ptr, "lipschitz"));
            m.bound.validate();
            if (v.contains("model") != v.contains("variable"))
                fail(ptr, "'model' and 'variable' go together");
            if (v.contains("model")) {
                const auto& model = lookup(doc_.models, text(v["model"], child(ptr, "model")), "model", child(ptr, "model"));
                if (model.stage_count() != m.bound.stage_count())
                    fail(child(ptr, "model"), "stage count differs from the bound spec");
                auto z = variable_ref(v["variable"], child(ptr, "variable"), "").value;
                if (z.size() != model.scenario_count())
                    fail(child(ptr, "variable"), "needs one value per scenario of the model (" +
                                                     std::to_string(model.scenario_count()) + ")");
                check_transition_lipschitz(model, m.bound);
                check_objective_lipschitz(model, m.bound, z);
                m.model = model;
                m.z = std::move(z);
            }
            entry.multistage = std::move(m);
            return entry;
        }
        fail(child(ptr, "kind"), "unknown kind '" + kind + "' (expected ball or multistage)");
    }
};

}  // namespace

Document parse_document(std::string_view text) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::string message = e.what();
        // Drop the library's own prefix up to the description.
        if (auto pos = message.find("syntax error"); pos != std::string::npos) message = message.substr(pos);
        throw InputError(line_column(text, e.byte), message);
    }
    return Loader(root).load();
}

}  // namespace drmo::cli
