#pragma once

#include <stdexcept>
#include <string>

namespace lstmsv {

/// Input outside the mathematical domain of an operation (non-positive price,
/// invalid parameter, etc.).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input too short, or dimensions that do not agree.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Input for which a statistic is undefined (constant series, zero variance).
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid configuration detected at construction time.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical estimation failed at runtime (e.g. every importance weight vanished).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace lstmsv
