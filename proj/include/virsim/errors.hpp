#ifndef VIRSIM_ERRORS_HPP
#define VIRSIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace virsim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Referencing a host/file/share that does not exist in the world.
struct WorldIntegrityError : SimError {
    using SimError::SimError;
};

// Lineage bookkeeping violations (unknown parent, duplicate surface signature).
struct LineageError : SimError {
    using SimError::SimError;
};

// Malformed domain value, e.g. a TransferId that is not 64 characters.
struct ValidationError : SimError {
    using SimError::SimError;
};

// A recovery strategy cannot run on this host (shadow copies disabled, ...).
struct StrategyUnavailableError : SimError {
    using SimError::SimError;
};

// Payoff-matrix construction violated one of its qualitative inequalities.
struct ConstraintError : SimError {
    using SimError::SimError;
};

// Replicator update with non-positive population fitness.
struct DegenerateFitnessError : SimError {
    using SimError::SimError;
};

struct IoError : SimError {
    using SimError::SimError;
};

// Scenario file problems; carries one message per violated constraint.
struct ConfigError : SimError {
    explicit ConfigError(std::vector<std::string> issue_list)
        : SimError(join(issue_list)), issues(std::move(issue_list)) {}
    explicit ConfigError(const std::string& issue)
        : SimError(issue), issues{issue} {}

    std::vector<std::string> issues;

private:
    static std::string join(const std::vector<std::string>& list) {
        std::string out = "invalid configuration:";
        for (const auto& s : list) {
            out += "\n  - " + s;
        }
        return out;
    }
};

}  // namespace virsim

#endif
