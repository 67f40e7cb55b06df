#pragma once

// Problem files, command dispatch and reports for the drmo command line.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "drmo/ambiguity.hpp"
#include "drmo/composite.hpp"
#include "drmo/dp.hpp"
#include "drmo/measure.hpp"
#include "drmo/transport.hpp"

namespace drmo::cli {

using Json = nlohmann::ordered_json;

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

/// Anything wrong with the input: syntax, schema, unresolved names, or a
/// module-level invariant violated on load. `where` is "line L, column C" for
/// syntax errors and a JSON pointer otherwise.
class InputError : public std::runtime_error {
public:
    InputError(std::string where, const std::string& message)
        : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)),
          message_(message) {}
    const std::string& where() const noexcept { return where_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string where_;
    std::string message_;
};

template <class T>
struct Typed {
    T value;
    std::string space;  // empty when the entry does not name one
};

struct BallSweepSpec {
    DiscreteMeasure center;
    std::string space;
    RandomVariable z;
    std::vector<double> epsilons;
};

struct MultistageSpec {
    MultistageBoundSpec bound;
    std::optional<TransitionModel> model;
    std::optional<RandomVariable> z;
};

struct BoundEntry {
    std::optional<BallSweepSpec> ball;
    std::optional<MultistageSpec> multistage;
};

/// A loaded and revalidated problem file. Entries are keyed by name.
struct Document {
    int version = 1;
    std::map<std::string, FiniteSpace> spaces;
    std::map<std::string, Typed<DiscreteMeasure>> measures;
    std::map<std::string, Typed<RandomVariable>> variables;
    std::map<std::string, Typed<AmbiguitySet>> sets;
    std::map<std::string, Typed<Partition>> partitions;
    std::map<std::string, Filtration> filtrations;
    std::map<std::string, RectangularSpec> rectangular;
    std::map<std::string, MultistageProblem> problems;
    std::map<std::string, TransitionModel> models;
    std::map<std::string, BoundEntry> bounds;
};

/// Throws InputError.
Document parse_document(std::string_view text);

/// 64-bit FNV-1a of the bytes, as "fnv1a64:" followed by 16 hex digits.
std::string digest(std::string_view bytes);

/// A JSON number, or the string "inf" / "-inf" / "nan" for non-finite values.
Json number(double x);
Json numbers(const std::vector<double>& xs);

/// Human-readable rendering of a report. Every scalar is printed exactly as
/// it is serialized in the JSON form.
std::string render_text(const Json& report);

/// Runs the command line (args excludes the program name) and returns the
/// exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drmo::cli
