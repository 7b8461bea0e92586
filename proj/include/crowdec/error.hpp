#pragma once

#include <stdexcept>
#include <string>

namespace crowdec {

/// Invalid experiment or problem parameters. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of a library call was violated by the caller.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File could not be opened, read or written. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file content. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Raised when an evaluation is requested after the FE budget is spent.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("fitness evaluation budget exhausted") {}
};

/// Fewer than two alive agents; no graph can be built.
class TopologyDegenerate : public std::runtime_error {
public:
    TopologyDegenerate() : std::runtime_error("topology needs at least two alive agents") {}
};

}  // namespace crowdec
