#ifndef AOIF_ERRORS_HPP
#define AOIF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aoif {

// Base class so callers can catch anything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid value for an operation's mathematical domain (x < 0, mean <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Bad user-facing input (config files, system descriptions). Carries the
// path of the offending field, e.g. "sources[2].lambda".
struct ConfigError : Error {
    ConfigError(std::string field_path, const std::string& what)
        : Error(field_path.empty() ? what : field_path + ": " + what),
          path(std::move(field_path)) {}
    std::string path;
};

// A numerical procedure failed to meet its contract (non-convergence,
// overflow, residual blow-up). `residual` carries whatever diagnostic the
// procedure tracked.
struct NumericalError : Error {
    NumericalError(const std::string& what, double residual_ = 0.0)
        : Error(what), residual(residual_) {}
    double residual;
};

// Matrix singular to working precision; `pivot` is the offending pivot.
struct SingularMatrixError : NumericalError {
    SingularMatrixError(const std::string& what, double pivot_)
        : NumericalError(what, pivot_), pivot(pivot_) {}
    double pivot;
};

// build_reduced_global called on a system that does not satisfy the
// homogeneous global-preemption preconditions.
struct UnsupportedReductionError : Error {
    using Error::Error;
};

// A simulated source never accumulates successful deliveries (e.g. error
// probability 1 with certain retransmission).
struct StarvationError : Error {
    StarvationError(const std::string& what, std::size_t source_)
        : Error(what), source(source_) {}
    std::size_t source;
};

}  // namespace aoif

#endif
