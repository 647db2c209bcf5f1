#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nadir {

// Bad numeric argument to a library function.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Scenario document problems; carries every violation found, each with its location.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

// Optimizer failed to reach an optimal point (infeasible, unbounded, iteration cap).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nadir
