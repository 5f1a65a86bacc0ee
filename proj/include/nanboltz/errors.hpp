#pragma once

#include <stdexcept>
#include <string>

namespace nanboltz {

/// Bad user input: malformed config, mismatched cloud sizes, nonpositive data
/// where positive is required. Maps to CLI exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Problem size above a configured solver limit. Maps to CLI exit code 2.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to reach its tolerance. Carries the best estimate
/// so callers can report it. Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate(estimate), error_bound(error_bound) {}
    double estimate;
    double error_bound;
};

}  // namespace nanboltz
