#pragma once

#include <stdexcept>
#include <string>

namespace fwdint {

/// Regularization index n does not divide the grid, or the lookahead
/// margin is too short for the requested shift.
class AlignmentError : public std::invalid_argument {
public:
    explicit AlignmentError(const std::string& what) : std::invalid_argument(what) {}
};

/// An Ito-side operation was handed a non-adapted integrand.
class AdaptednessError : public std::invalid_argument {
public:
    explicit AdaptednessError(const std::string& what) : std::invalid_argument(what) {}
};

/// A process or multiplier evaluator produced a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// A time stepper left the configured overflow guard.
class StabilityError : public std::runtime_error {
public:
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fwdint
