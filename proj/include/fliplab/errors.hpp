#pragma once

#include <stdexcept>
#include <string>

namespace fliplab {

/// Shape, ring or format mismatch between operands.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation's precondition on its input scheme does not hold
/// (e.g. the input does not satisfy the Brent equations).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A move whose invariants do not hold against the scheme it is applied to.
class RejectedMove : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed scheme / spec file. `where()` carries a line:column or a field path.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// Well-formed file naming a coefficient ring this library cannot represent.
class UnsupportedRingError : public ParseError {
public:
    using ParseError::ParseError;
};

} // namespace fliplab
