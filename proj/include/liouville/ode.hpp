#pragma once

// Radial Cauchy problem in the log variable t = log r:
//
//   z'' = -e^{2(N+1)t + z} + tau e^{2t + u}
//   u'' = -e^{2t + u} + tau e^{2(N+1)t + z}
//   f'  =  e^{2(N+1)t + z},   g' = e^{2t + u}
//
// with z(t) = v1(e^t), u(t) = v2(e^t). The accumulated fluxes f, g tend to
// beta1, beta2 and satisfy the first integrals z' = -(f - tau g),
// u' = -(g - tau f).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/types.hpp"

namespace liouville::ode {

struct RadialState {
    double t = 0.0;
    double z = 0.0;
    double u = 0.0;
    double dz = 0.0;
    double du = 0.0;
    double f = 0.0;
    double g = 0.0;
};

/// d/dt of (z, u, dz, du, f, g).
struct StateDerivative {
    double z = 0.0;
    double u = 0.0;
    double dz = 0.0;
    double du = 0.0;
    double f = 0.0;
    double g = 0.0;
};

/// Raised when an exponential source overflows or the step size collapses.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

/// Raised when the requested launch radius is too large for the tolerance.
class LaunchError : public std::invalid_argument {
public:
    LaunchError(const std::string& what, double suggested_r0)
        : std::invalid_argument(what), suggested_r0_(suggested_r0) {}
    double suggested_r0() const noexcept { return suggested_r0_; }

private:
    double suggested_r0_;
};

/// e^{2(N+1)t + z}: the weighted density of the first component.
double source1(const RadialState& s, const SystemParams& params);
/// e^{2t + u}
double source2(const RadialState& s, const SystemParams& params);

StateDerivative rhs(const RadialState& s, const SystemParams& params);

/// Pohozaev-type quantities along the flow. psi0 vanishes identically on
/// exact solutions; psi1 and psi2 stay positive.
struct PsiValues {
    double psi0 = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;
};

PsiValues pohozaev_psi(const RadialState& s, const SystemParams& params);

/// Initial values v1(0), v2(0).
struct LaunchData {
    double v1_origin = 0.0;
    double v2_origin = 0.0;
};

/// Size of the neglected terms of the two-term expansion at radius r0:
/// a^2 + a b + b^2 with a = e^{v1(0)} r0^{2N+2}, b = e^{v2(0)} r0^2.
double launch_remainder(const SystemParams& params, LaunchData data, double r0);

/// Largest radius (capped at 0.3 and at 0.3 * e^{-v1(0)/(2(N+1))}) whose
/// remainder stays below tolerance.
double suggested_launch_radius(const SystemParams& params, LaunchData data, double tolerance);

/// State at t0 = log r0 from the local expansion
///   v1 ~ a1 - e^{a1} r^{2N+2}/(2N+2)^2 + tau e^{a2} r^2/4
///   v2 ~ a2 - e^{a2} r^2/4 + tau e^{a1} r^{2N+2}/(2N+2)^2
/// with f, g and the log-derivatives taken consistently, so that
/// dz = -(f - tau g) and du = -(g - tau f) hold exactly.
/// Throws LaunchError when launch_remainder exceeds tolerance.
RadialState series_launch(const SystemParams& params, LaunchData data, double r0,
                          double tolerance = 1e-14);
RadialState series_launch(const SystemParams& params, double alpha, double r0,
                          double tolerance = 1e-14);

/// Two-sided bracket for the flux still to come after a state whose slopes
/// sigma1 = f - tau g and sigma2 = g - tau f exceed 2(N+1) and 2. The
/// upper bounds solve T1 = F/(m1 - tau T2), T2 = G/(m2 - tau T1) with
/// margins m1 = sigma1 - 2(N+1), m2 = sigma2 - 2; the lower bounds are
/// F/(m1 + T1), G/(m2 + T2).
struct TailEstimate {
    bool available = false;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double bound1 = 0.0;
    double bound2 = 0.0;
    double lower1 = 0.0;
    double lower2 = 0.0;

    double correction1() const { return 0.5 * (bound1 + lower1); }
    double correction2() const { return 0.5 * (bound2 + lower2); }
    double error1() const { return 0.5 * (bound1 - lower1); }
    double error2() const { return 0.5 * (bound2 - lower2); }
};

TailEstimate tail_correction(const RadialState& s, const SystemParams& params);

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 400.0;
    double tail_tol = 1e-8;
    double launch_tol = 1e-14;
    std::size_t max_steps = 200000;
};

struct Sample {
    RadialState state;
    PsiValues psi;
};

struct Trajectory {
    SystemParams params;
    double alpha = 0.0; // v1(0)
    LaunchData launch;
    std::vector<Sample> samples;
    FluxPair flux;
    double t_end = 0.0;
    double sigma1 = 0.0; // tail model: decay slopes at t_end
    double sigma2 = 0.0;
    bool converged = false;
    bool rescaled = false; // integrated in rescaled coordinates
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::string status;
};

/// Integrates from the series launch until both tail bounds drop below
/// tail_tol (converged) or t reaches t_max (flagged partial result). When
/// |v1(0) - (N+1) v2(0)| >= 40 the scale-invariant rescaled problem is
/// integrated and the samples are mapped back.
Trajectory integrate(const SystemParams& params, LaunchData data, const IntegratorConfig& config = {});
Trajectory integrate(const SystemParams& params, double alpha, const IntegratorConfig& config = {});

}  // namespace liouville::ode
