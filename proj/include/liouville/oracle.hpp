#pragma once

// Closed-form single Liouville solutions and the Toda flux point.

#include <functional>

#include "liouville/ode.hpp"
#include "liouville/types.hpp"

namespace liouville::oracle {

/// xi(r) = -2 log(1 + r^{2N+2} / (8(N+1)^2)); r^{2N} e^xi has flux 4(N+1).
double xi_profile(double bigN, double r);

/// r xi'(r)
double xi_log_derivative(double bigN, double r);

/// Exact int_0^R r^{2N+1} e^{xi} dr = 4(N+1) W/(1+W), W = R^{2N+2}/(8(N+1)^2).
double xi_partial_flux(double bigN, double R);

/// u(r) = log[8(N+1)^2 mu r^{2N} / (1 + mu r^{2N+2})^2].
double radial_family(double bigN, double mu, double r);

/// u(r) - 2N log r, finite at r = 0.
double radial_family_regular(double bigN, double mu, double r);

/// The member of radial_family whose regular part starts at v(0) = alpha.
double family_mu(double bigN, double alpha);

/// radial_family_regular(N, mu, r) = xi(c r) + shift.
struct XiScaling {
    double c = 1.0;
    double shift = 0.0;
};
XiScaling xi_scaling(double bigN, double mu);

FluxPair toda_reference(double bigN);

/// Exact state of the decoupled (tau = 0) problem with v1(0) = alpha,
/// v2(0) = 0, at log-radius t.
ode::RadialState decoupled_state(double bigN, double alpha, double t);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    double tail = 0.0;
};

/// Adaptive Gauss-Kronrod over [0, R] with tolerance tol.
QuadratureResult integrate_finite(const std::function<double(double)>& integrand, double R,
                                  double tol = 1e-10);

/// int_0^inf r e^{u} dr for the radial family: quadrature up to the radius
/// where mu r^{2N+2} = 1e6, then the asymptotic series of the tail.
QuadratureResult family_flux(double bigN, double mu, double tol = 1e-10);

/// Quadrature of r^{2N+1} e^{xi} over [0, R].
QuadratureResult xi_flux(double bigN, double R, double tol = 1e-10);

}  // namespace liouville::oracle
