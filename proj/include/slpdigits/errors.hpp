#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slpdigits {

// Text did not conform to the SLP v1 format. `line` is 1-based (0 if unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed tokens, but the program references a value not yet defined.
class MalformedProgram : public ParseError {
public:
    using ParseError::ParseError;
};

class ValueNotPositive : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SizeCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

class NotInvertible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class InfeasiblePlan : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace slpdigits
