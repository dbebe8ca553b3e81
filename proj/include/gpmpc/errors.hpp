#pragma once

#include <stdexcept>
#include <string>

namespace gpmpc {

/// Raised when a caller violates a documented precondition (dimensions,
/// orderings, empty inputs).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation produces a result that theory rules out, e.g. a
/// clearly negative variance or a Cholesky factorization that fails even after
/// jitter escalation.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// The sequential convex programming loop hit a state it cannot recover from
/// (non-optimal subproblem, negative predicted reduction).
class ScpError : public std::runtime_error {
public:
    explicit ScpError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool condition, const char* message) {
    if (!condition) {
        throw ContractError(message);
    }
}

}  // namespace detail
}  // namespace gpmpc
