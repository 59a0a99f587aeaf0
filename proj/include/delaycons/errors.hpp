#pragma once

#include <stdexcept>
#include <string>

namespace delaycons {

/// Rejected input: malformed files, violated preconditions, infeasible parameters.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative numerical routine did not reach its certified tolerance.
/// The message carries whatever diagnostics the routine had at the point of failure.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace delaycons
