#pragma once

#include <stdexcept>
#include <string>

namespace cournot {

// Structural problems with inputs: duplicate or unknown ids, broken invariants,
// out-of-range options.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lookup of a firm or market id that does not exist in the game.
struct UnknownIdError : ValidationError {
    using ValidationError::ValidationError;
};

// A quantity outside a firm's feasible set (negative, above capacity, or on an
// inaccessible market).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An optimization problem with no finite optimum, e.g. a firm facing a constant
// price above its flat marginal cost with no capacity limit.
struct UnboundedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation not defined for the given price type.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver exhausted its iteration budget. Carries the last complementarity
// residual so callers can judge how far off the final iterate was.
struct NonConvergenceError : std::runtime_error {
    double residual;
    long iterations;
    NonConvergenceError(const std::string& msg, double residual_, long iterations_)
        : std::runtime_error(msg), residual(residual_), iterations(iterations_) {}
};

}  // namespace cournot
