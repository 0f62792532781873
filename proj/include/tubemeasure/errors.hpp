#pragma once

#include <stdexcept>
#include <string>

namespace tubemeasure {

/// Thrown when a text input (point file, measure JSON) cannot be parsed.
/// Carries the 1-based line number when one is known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Thrown when a computation cannot proceed numerically
/// (ill-conditioned solve, rejection-round cap reached).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an experiment's validity window is violated.
class WindowError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace tubemeasure
