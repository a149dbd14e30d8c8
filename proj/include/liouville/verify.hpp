#pragma once

// Diagnostics along radial trajectories and the general coupling-matrix layer.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "liouville/ode.hpp"
#include "liouville/types.hpp"

namespace liouville::verify {

/// Per-sample Pohozaev and monotone quantities over a trajectory.
struct DiagnosticsProfile {
    std::vector<double> t;
    std::vector<double> psi0;
    std::vector<double> psi1;
    std::vector<double> psi2;
    std::vector<double> r0;
    std::vector<double> r1;
    std::vector<double> h;

    double max_abs_psi0 = 0.0;
    double max_scaled_psi0 = 0.0; // max |psi0| / (1 + f^2 + g^2)
    double min_psi1 = 0.0;
    double min_psi2 = 0.0;
    double final_psi0 = 0.0;
};

DiagnosticsProfile psi_profile(const ode::Trajectory& traj);

struct RQuantities {
    std::vector<double> r0;
    std::vector<double> r1;
    std::vector<double> h;
    std::vector<double> dr0_fd; // centered differences on the samples
    std::vector<double> dr1_fd;
    std::vector<double> dr0;    // analytic derivative along the flow
    std::vector<double> dr1;

    /// max |fd - analytic| / (1 + |analytic|) over interior samples, with the
    /// largest local step for reference.
    double max_fd_mismatch = 0.0;
    double max_local_step = 0.0;

    std::ptrdiff_t g_crosses_4 = -1; // first sample index with g >= 4
    int r0_increase_count = 0;       // after g >= 4, steps where R0 grows beyond tolerance
    int h_sign_changes = 0;          // after g >= 4

    double final_difference = 0.0;   // R1 - R0 at the last sample
    double predicted_difference = 0.0; // limit formula with tail-corrected fluxes
};

/// R0, R1 and H; dR0/dt = -(1 - 2tau) F ((1+2tau)/2 g(g-4) + G) and
/// dR1/dt = -(1 - 2tau) G (F + (1+2tau)/2 f(f - beta*_1)) hold up to psi0.
RQuantities r_quantities(const ode::Trajectory& traj, double monotone_tol = 1e-8);

/// Full profile with psi and R columns filled.
DiagnosticsProfile diagnostics(const ode::Trajectory& traj);

struct DecayReport {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double deviation = 0.0;
    double margin1 = 0.0; // sigma1 - 2(N+1)
    double margin2 = 0.0; // sigma2 - 2
    bool above_thresholds = false;
};

/// Throws PreconditionError for non-converged trajectories.
DecayReport decay_check(const ode::Trajectory& traj);

/// Coupling matrix K with vortex exponents N1, N2 > -1.
struct GeneralSystem {
    double k11 = 1.0;
    double k12 = 0.0;
    double k21 = 0.0;
    double k22 = 1.0;
    double n1 = 0.0;
    double n2 = 0.0;
};

double determinant(const GeneralSystem& sys);
bool competitive(const GeneralSystem& sys);

/// k11|k21| b1^2 + k22|k12| b2^2 + 2 k12|k21| b1 b2
///   - 4(N1+1)|k21| b1 - 4(N2+1)|k12| b2.
/// Throws PreconditionError when k12 k21 < 0.
double general_pohozaev_residual(const GeneralSystem& sys, double beta1, double beta2);

/// k11 b1^2 + k22 b2^2 + 2 k12 b1 b2 - 4(N1+1) b1 - 4(N2+1) b2 for
/// symmetric K. Throws PreconditionError when k12 != k21.
double symmetric_pohozaev_residual(const GeneralSystem& sys, double beta1, double beta2);

/// Shift v1 += log|k21|, v2 += log|k12| turning K into the symmetric
/// matrix [[k11/|k21|, s], [s, k22/|k12|]], s = sign(k12), with fluxes
/// scaled by (|k21|, |k12|).
struct Symmetrized {
    GeneralSystem system;
    double flux_scale1 = 1.0;
    double flux_scale2 = 1.0;
};

/// Requires k12, k21 nonzero with the same sign.
Symmetrized symmetrize(const GeneralSystem& sys);

struct Normalization {
    double tau1 = 0.0; // -k12 / k22
    double tau2 = 0.0; // -k21 / k11
    double flux_scale1 = 1.0; // beta_i -> k_ii beta_i
    double flux_scale2 = 1.0;
    bool symmetric = false;   // tau1 == tau2 within 1e-12
    std::optional<SystemParams> params; // when symmetric, n2 = 0, n1 > 0, tau in [0,1)
};

/// Throws PreconditionError when k11 <= 0 or k22 <= 0.
Normalization normalize_general(const GeneralSystem& sys);

struct InfinityReport {
    double beta1_infty = 0.0; // k11 b1 + k12 b2
    double beta2_infty = 0.0; // k22 b2 + k21 b1
    double margin1 = 0.0;     // beta1_infty - 2(N1+1)
    double margin2 = 0.0;
    bool holds1 = false;
    bool holds2 = false;
    bool all_hold() const { return holds1 && holds2; }
    std::string detail;
};

InfinityReport beta_infty(const GeneralSystem& sys, double beta1, double beta2);

}  // namespace liouville::verify
