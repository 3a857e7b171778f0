#pragma once

#include <stdexcept>
#include <string>

namespace mch {

// Caller passed arguments of the wrong shape (dimension mismatch, bad index).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Arguments have the right shape but invalid values (degenerate box, T <= 0,
// endpoints inside a forbidden region).
class InputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Run configuration problems. Carries the offending line when known (0 otherwise).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// The numerics produced something that cannot be turned into a spectrum.
class DiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mch
