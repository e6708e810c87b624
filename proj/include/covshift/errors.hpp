#pragma once

#include <stdexcept>
#include <string>

namespace covshift {

/// Inputs that do not fit together: different sample spaces, a partition that
/// is not a coarsening, malformed text input.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The target puts mass on a cell the source never visits, so the source
/// posterior on that cell cannot be learned and a shift predicate has no
/// answer.
class IndeterminateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace covshift
