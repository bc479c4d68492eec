#pragma once

#include <stdexcept>
#include <string>

namespace creditcap {

// Process exit codes shared between the library's error taxonomy and the CLI.
enum class ExitCode : int {
    Ok = 0,
    Config = 2,      // malformed config, unreadable or unparsable input
    Validation = 3,  // portfolio invariant violations
    Numeric = 4,     // domain, capacity, or infeasible-scenario errors
    Golden = 5,      // reference-table cell mismatch
};

class Error : public std::runtime_error {
public:
    Error(const std::string& msg, ExitCode code) : std::runtime_error(msg), code_(code) {}
    ExitCode exit_code() const noexcept { return code_; }

private:
    ExitCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(m, ExitCode::Config) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(m, ExitCode::Config) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(m, ExitCode::Validation) {}
};

// Precondition violation on a numerical operation (non-finite input, argument
// outside the mathematical domain, dimension mismatch).
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(m, ExitCode::Numeric) {}
};

// Input exceeds a hard size limit of an exact algorithm.
struct CapacityError : Error {
    explicit CapacityError(const std::string& m) : Error(m, ExitCode::Numeric) {}
};

// Requested computation path does not exist for this input shape.
struct UnsupportedModeError : Error {
    explicit UnsupportedModeError(const std::string& m) : Error(m, ExitCode::Numeric) {}
};

// Truncation box is (nearly) unreachable under the factor distribution.
struct InfeasibleScenarioError : Error {
    InfeasibleScenarioError(const std::string& m, double rate)
        : Error(m, ExitCode::Numeric), acceptance_rate(rate) {}
    double acceptance_rate;
};

struct GoldenMismatchError : Error {
    explicit GoldenMismatchError(const std::string& m) : Error(m, ExitCode::Golden) {}
};

}  // namespace creditcap
