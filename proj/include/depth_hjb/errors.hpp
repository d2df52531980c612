#pragma once

#include <stdexcept>
#include <string>

namespace depth_hjb {

// Error taxonomy shared across the library. Each condition a caller may want
// to distinguish gets its own type; everything derives from std::runtime_error
// so catch-all handling in the CLI stays trivial.

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedAnalytic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimatorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUniqueArgmin : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotUniformConvex : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadSupport : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoNeighbor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularTransform : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration budget exhausted before the sweep residual dropped below
// tolerance. Carries the final residual so callers can report it.
struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& msg, double residual, int iterations)
        : std::runtime_error(msg), max_update_last_pass(residual), iterations(iterations) {}
    double max_update_last_pass;
    int iterations;
};

}  // namespace depth_hjb
