#pragma once

#include <stdexcept>
#include <string>

namespace dosx {

/// Spectral parameter on the real axis, or another argument outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested order or ground-set size exceeds a hard combinatorial cap.
class SizeLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// No momentum cutoff inside the truncated lattice meets the requested tail budget.
class CutoffInsufficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dosx
