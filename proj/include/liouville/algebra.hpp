#pragma once

// Closed-form objects attached to the flux ellipse
//
//   E:  b1^2 + b2^2 - 2 tau b1 b2 - 4(N+1) b1 - 4 b2 = 0,   b1, b2 > 0
//
// together with its branch functions, the critical couplings at which the
// radial solvability bounds switch branch, and predicates built on them.
// Everything here is a pure function of its arguments.

#include <string>

#include "liouville/types.hpp"

namespace liouville::algebra {

/// Values attached to index 1 (v1 component) and index 2 (v2 component).
struct IndexPair {
    double first = 0.0;
    double second = 0.0;
};

/// Extreme fluxes of E on the lines b1 - tau b2 = 2(N+1) and b2 - tau b1 = 2.
struct Extremes {
    double under1 = 0.0;
    double over1 = 0.0;
    double under2 = 0.0;
    double over2 = 0.0;
};

/// Open interval bounds for radial solvability.
struct SolvabilityBounds {
    double minus1 = 0.0;
    double plus1 = 0.0;
    double minus2 = 0.0;
    double plus2 = 0.0;
};

/// Flux limits of the shooting curve for alpha -> +inf (plus*) and
/// alpha -> -inf (minus*).
struct ShootingLimits {
    double plus1 = 0.0;
    double plus2 = 0.0;
    double minus1 = 0.0;
    double minus2 = 0.0;
};

struct ThresholdSet {
    double discriminant = 0.0;
    Extremes extremes;
    IndexPair star;
    IndexPair star_star;
    IndexPair tau0;
    IndexPair tau1;
    SolvabilityBounds bounds;
    ShootingLimits limits;
};

enum class Sign { plus, minus };

enum class EllipseBranch {
    interior,    // b1 - tau b2 > 2(N+1) and b2 - tau b1 > 2
    lower_left,  // b1 - tau b2 <= 2(N+1)
    lower_right, // b2 - tau b1 <= 2
    off_ellipse
};

std::string to_string(EllipseBranch branch);

double discriminant(const SystemParams& params);

double ellipse_residual(double beta1, double beta2, const SystemParams& params);

/// Normalization used for every residual comparison: 1 + b1^2 + b2^2.
double residual_scale(double beta1, double beta2);

/// Requires 0 <= tau < 1.
Extremes beta_extremes(const SystemParams& params);

/// Branches of E solved for b2 as a function of b1 (phi1) and for b1 as a
/// function of b2 (phi2). A negative radicand beyond round-off throws
/// DomainError naming the admissible interval.
double phi1(double beta1, Sign sign, const SystemParams& params);
double phi2(double beta2, Sign sign, const SystemParams& params);

/// first = 4(N+1) + 8 tau, second = 4 + 8 tau (N+1)
IndexPair beta_star(const SystemParams& params);
/// first = 2 tau * star.second, second = 2 tau * star.first
IndexPair beta_star_star(const SystemParams& params);

/// Lower critical couplings: first is where beta**_1 = 4(N+1), second is
/// where beta**_2 = 4.
IndexPair tau0(double bigN);

double psi1(double tau, double bigN);
double psi2(double tau, double bigN);

/// Upper critical couplings (roots of psi1 and psi2 in (1/2, 1/sqrt 2)),
/// bisection to 1e-12.
IndexPair tau1(double bigN);

SolvabilityBounds beta_pm(const SystemParams& params);
ShootingLimits beta_limits(const SystemParams& params);

ThresholdSet thresholds(const SystemParams& params);

struct PointClass {
    EllipseBranch branch = EllipseBranch::off_ellipse;
    double residual = 0.0;
    double margin1 = 0.0; // b1 - tau b2 - 2(N+1)
    double margin2 = 0.0; // b2 - tau b1 - 2
};

/// Classifies (b1, b2) into the three branches of E. A point is on E when
/// |residual| <= tol * residual_scale; margins within tol * (1 + b1 + b2)
/// of zero count as the closed side of the boundary.
PointClass classify_point(double beta1, double beta2, const SystemParams& params,
                          double tol = 1e-8);

struct SolvabilityReport {
    bool solvable = false;
    bool toda_case = false;
    bool in_interval = false;
    bool on_branch = false;
    bool near_endpoint = false;
    double lower = 0.0;
    double upper = 0.0;
    double branch_value = 0.0; // phi1^+(b1), or 4(N+2) at tau = 1/2
    double branch_deviation = 0.0;
    std::string failure; // empty when solvable
};

/// Radial solvability of the pair (b1, b2). tol is relative: the b2
/// constraint is |b2 - phi1^+(b1)| <= tol * (1 + |b2|). Interval endpoints
/// are excluded; queries within tol of an endpoint are flagged.
SolvabilityReport solvable_radial(double beta1, double beta2, const SystemParams& params,
                                  double tol = 1e-8);

struct ConditionCheck {
    bool passed = false;
    double margin = 0.0;
};

/// Necessary conditions for solvability of a flux pair: tau in (0,1), the
/// ellipse identity, integrability (b_i,tau above 2(N_i+1)) and the radial
/// bounds b1 > 4(N+1), b2 > 4.
struct ConditionReport {
    ConditionCheck tau_range;
    ConditionCheck ellipse;        // margin holds the raw residual
    ConditionCheck integrability1; // b1 - tau b2 - 2(N+1)
    ConditionCheck integrability2; // b2 - tau b1 - 2
    ConditionCheck radial1;        // b1 - 4(N+1)
    ConditionCheck radial2;        // b2 - 4
    bool all_passed() const;
};

ConditionReport necessary_conditions(double beta1, double beta2, const SystemParams& params,
                                     double tol = 1e-6);

/// Pointwise bounds every radial flux pair obeys in the intermediate
/// coupling ranges (see the applicability flags).
struct FluxBoundsReport {
    bool below_half = false;       // tau < 1/2: b_i <= beta*_i
    bool above_half_index2 = false; // tau in (1/2, tau1_2): b2 <= beta**_2, b1 >= beta*_1
    bool above_half_index1 = false; // tau in (1/2, tau1_1): b1 <= beta**_1, b2 >= beta*_2
    int violations = 0;
    std::string detail;
};

FluxBoundsReport flux_bounds_check(double beta1, double beta2, const SystemParams& params,
                                   double tol);

}  // namespace liouville::algebra
