#pragma once

#include <stdexcept>
#include <string>

namespace drmo {

/// Input violates a documented invariant (bad sizes, negative mass, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation called outside of its stated precondition.
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An exhaustive enumeration would exceed its hard cap.
class CapExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A composite fold reached an atom that no measure in the set can charge.
class UnreachableAtomError : public std::runtime_error {
public:
    UnreachableAtomError(std::size_t stage, std::size_t atom)
        : std::runtime_error("atom " + std::to_string(atom) + " of stage " + std::to_string(stage) +
                             " is unreachable by every measure of the ambiguity set"),
          stage_(stage), atom_(atom) {}

    std::size_t stage() const noexcept { return stage_; }
    std::size_t atom() const noexcept { return atom_; }

private:
    std::size_t stage_;
    std::size_t atom_;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace drmo
