#pragma once

// The curve alpha -> (beta1(alpha), beta2(alpha)) of radial solutions with
// v1(0) = alpha, v2(0) = 0.

#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/algebra.hpp"
#include "liouville/ode.hpp"
#include "liouville/types.hpp"

namespace liouville::shooting {

FluxPair flux_of_alpha(const SystemParams& params, double alpha,
                       const ode::IntegratorConfig& config = {});

struct SweepPoint {
    double alpha = 0.0;
    FluxPair flux;
    bool converged = false;
    bool failed = false;        // integration threw; see error
    std::string error;
    double residual = 0.0;      // ellipse residual / residual_scale
    algebra::ConditionReport conditions;
};

struct LimitEstimate {
    bool available = false;
    FluxPair flux;
    int points_used = 0;
};

struct SweepResult {
    SystemParams params;
    std::vector<SweepPoint> points;
    LimitEstimate limit_plus;
    LimitEstimate limit_minus;

    bool all_converged() const;
};

/// n equally spaced values from lo to hi (n >= 1).
std::vector<double> linear_grid(double lo, double hi, int n);

/// Integrates every grid point on up to `threads` workers (0: hardware
/// concurrency) with a static partition; the result does not depend on the
/// thread count. Limit estimates fit beta = L + c/alpha over the converged
/// points in the outer third of each grid end.
SweepResult sweep(const SystemParams& params, const std::vector<double>& grid,
                  const ode::IntegratorConfig& config = {}, unsigned threads = 0);

struct LadderDiagnostics {
    std::vector<double> alphas;   // |alpha| increasing
    std::vector<FluxPair> values;
    FluxPair extrapolated;        // 2 beta(a) - beta(a/2)
    double target1 = 0.0;         // closed-form limit
    double target2 = 0.0;
    double rel_distance1 = 0.0;
    double rel_distance2 = 0.0;
    bool monotone = false;        // each component monotone along the ladder
    bool approaching = false;     // distance to the target nonincreasing along the ladder
    bool converged = false;       // every ladder point converged
    bool reliable = false;
    std::string note;
};

struct LimitsReport {
    double alpha_max = 0.0;
    LadderDiagnostics plus;
    LadderDiagnostics minus;
};

/// Ladder alpha in {a/4, a/2, a} on each side; requires alpha_max >= 10 and
/// tau in (0,1).
LimitsReport estimate_limits(const SystemParams& params, double alpha_max,
                             const ode::IntegratorConfig& config = {}, unsigned threads = 0);

/// Raised when beta1 does not straddle the target on the bracket.
class BracketError : public std::runtime_error {
public:
    BracketError(const std::string& what, double beta_lo, double beta_hi)
        : std::runtime_error(what), beta_lo_(beta_lo), beta_hi_(beta_hi) {}
    double beta_lo() const noexcept { return beta_lo_; }
    double beta_hi() const noexcept { return beta_hi_; }

private:
    double beta_lo_;
    double beta_hi_;
};

struct TargetSolution {
    double alpha = 0.0;
    FluxPair flux;
    int evaluations = 0;
};

/// Bisection on alpha until |beta1(alpha) - target| <= tol. The target
/// must lie strictly inside (beta^-_1, beta^+_1); at tau = 1/2 it must equal
/// 4(N+2) within tol and any alpha of the bracket is returned.
TargetSolution solve_for_target(const SystemParams& params, double target_beta1, double alpha_lo,
                                double alpha_hi, const ode::IntegratorConfig& config = {},
                                double tol = 1e-6);

}  // namespace liouville::shooting
