#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace alm {

// Bad arguments: dimension mismatch, infeasible point, empty sample set.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The requested operation is not available for this variant or data.
struct CapabilityError : std::logic_error {
    using std::logic_error::logic_error;
};

// A precondition on mathematical content failed (e.g. v is not a normal).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inner solver hit its iteration cap; carries the best iterate found.
struct SubproblemFailed : NumericalError {
    SubproblemFailed(const std::string &msg, Eigen::VectorXd best, int iters)
        : NumericalError(msg), best_iterate(std::move(best)), inner_iters(iters) {}
    Eigen::VectorXd best_iterate;
    int inner_iters;
};

} // namespace alm
