#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Coupling and vortex exponent of the radial competitive system
///
///   -(r v1')' = r^{2N+1} e^{v1} - tau r e^{v2}
///   -(r v2')' = r e^{v2} - tau r^{2N+1} e^{v1}
///
/// tau = 0 is accepted (decoupled oracle runs); the solvability theory
/// needs tau in (0, 1).
struct SystemParams {
    double tau = 0.5;
    double bigN = 1.0;
};

/// Normalized fluxes beta1 = int r^{2N+1} e^{v1} dr, beta2 = int r e^{v2} dr
/// with absolute error estimates.
struct FluxPair {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double err1 = 0.0;
    double err2 = 0.0;
};

/// Argument outside the domain of a closed-form expression or of the model.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation called with arguments violating its documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws DomainError unless 0 <= tau < 1 and N > 0 (both finite).
void validate(const SystemParams& params);

/// As validate() but additionally requires tau > 0.
void validate_competitive(const SystemParams& params);

}  // namespace liouville
