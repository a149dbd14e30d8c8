#include "liouville/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace liouville {

void validate(const SystemParams& params) {
    if (!std::isfinite(params.tau) || params.tau < 0.0 || params.tau >= 1.0) {
        std::ostringstream os;
        os << "coupling tau = " << params.tau << " outside [0, 1)";
        throw DomainError(os.str());
    }
    if (!std::isfinite(params.bigN) || params.bigN <= 0.0) {
        std::ostringstream os;
        os << "vortex exponent N = " << params.bigN << " must be positive";
        throw DomainError(os.str());
    }
}

void validate_competitive(const SystemParams& params) {
    validate(params);
    if (params.tau <= 0.0) {
        throw DomainError("coupling tau must satisfy tau in (0, 1)");
    }
}

}  // namespace liouville

namespace liouville::algebra {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Clamp a radicand that is negative only through cancellation.
template <typename Upper>
double checked_radicand(double value, double magnitude, double arg, Upper&& upper,
                        const char* name) {
    if (value >= 0.0) {
        return value;
    }
    if (value >= -64.0 * kEps * magnitude) {
        return 0.0;
    }
    std::ostringstream os;
    os << name << "(" << arg << ") undefined: argument must lie in (0, " << upper() << "]";
    throw DomainError(os.str());
}

bool is_half(double tau) { return std::abs(tau - 0.5) <= 1e-12; }

}  // namespace

std::string to_string(EllipseBranch branch) {
    switch (branch) {
    case EllipseBranch::interior:
        return "interior";
    case EllipseBranch::lower_left:
        return "lower-left";
    case EllipseBranch::lower_right:
        return "lower-right";
    case EllipseBranch::off_ellipse:
        return "off-ellipse";
    }
    return "unknown";
}

double discriminant(const SystemParams& params) {
    const double n1 = params.bigN + 1.0;
    return n1 * n1 + 2.0 * params.tau * n1 + 1.0;
}

double ellipse_residual(double beta1, double beta2, const SystemParams& params) {
    const double n1 = params.bigN + 1.0;
    return beta1 * beta1 + beta2 * beta2 - 2.0 * params.tau * beta1 * beta2 - 4.0 * n1 * beta1 -
           4.0 * beta2;
}

double residual_scale(double beta1, double beta2) { return 1.0 + beta1 * beta1 + beta2 * beta2; }

Extremes beta_extremes(const SystemParams& params) {
    validate_competitive(params);
    const double tau = params.tau;
    const double n1 = params.bigN + 1.0;
    const double root = std::sqrt(discriminant(params));
    const double pre = 2.0 / (1.0 - tau * tau);
    Extremes e;
    e.under1 = pre * (n1 + tau + tau * root);
    e.over1 = pre * (n1 + tau + root);
    e.under2 = pre * (1.0 + tau * n1 + tau * root);
    e.over2 = pre * (1.0 + tau * n1 + root);
    return e;
}

double phi1(double beta1, Sign sign, const SystemParams& params) {
    const double n1 = params.bigN + 1.0;
    const double center = 2.0 + params.tau * beta1;
    const double lead = center * center;
    const double raw = lead - beta1 * (beta1 - 4.0 * n1);
    auto upper = [&] {
        return params.tau < 1.0 ? beta_extremes(params).over1
                                : std::numeric_limits<double>::quiet_NaN();
    };
    const double rad =
        checked_radicand(raw, lead + beta1 * beta1 + 4.0 * n1 * std::abs(beta1), beta1, upper, "phi1");
    const double s = std::sqrt(rad);
    return sign == Sign::plus ? center + s : center - s;
}

double phi2(double beta2, Sign sign, const SystemParams& params) {
    const double n1 = params.bigN + 1.0;
    const double center = 2.0 * n1 + params.tau * beta2;
    const double lead = center * center;
    const double raw = lead - beta2 * (beta2 - 4.0);
    auto upper = [&] {
        return params.tau < 1.0 ? beta_extremes(params).over2
                                : std::numeric_limits<double>::quiet_NaN();
    };
    const double rad =
        checked_radicand(raw, lead + beta2 * beta2 + 4.0 * std::abs(beta2), beta2, upper, "phi2");
    const double s = std::sqrt(rad);
    return sign == Sign::plus ? center + s : center - s;
}

IndexPair beta_star(const SystemParams& params) {
    const double n1 = params.bigN + 1.0;
    return {4.0 * n1 + 8.0 * params.tau, 4.0 + 8.0 * params.tau * n1};
}

IndexPair beta_star_star(const SystemParams& params) {
    const IndexPair star = beta_star(params);
    return {2.0 * params.tau * star.second, 2.0 * params.tau * star.first};
}

IndexPair tau0(double bigN) {
    if (!(bigN > 0.0) || !std::isfinite(bigN)) {
        throw DomainError("tau0 requires N > 0");
    }
    const double n1 = bigN + 1.0;
    return {n1 / (1.0 + std::sqrt(1.0 + 4.0 * n1 * n1)), 1.0 / (n1 + std::sqrt(n1 * n1 + 4.0))};
}

double psi1(double tau, double bigN) {
    return 2.0 * (1.0 - 2.0 * tau * tau) * (1.0 + 2.0 * tau * (bigN + 1.0)) - 1.0;
}

double psi2(double tau, double bigN) {
    return 2.0 * (1.0 - 2.0 * tau * tau) * (bigN + 1.0 + 2.0 * tau) - (bigN + 1.0);
}

namespace {

template <typename F>
double bisect_decreasing_root(F&& fn, double lo, double hi, const char* name) {
    const double flo = fn(lo);
    const double fhi = fn(hi);
    if (!(flo > 0.0 && fhi < 0.0)) {
        std::ostringstream os;
        os << name << ": no sign change on [" << lo << ", " << hi << "] (values " << flo << ", "
           << fhi << ")";
        throw DomainError(os.str());
    }
    // Run to full double resolution; the bracket ends well below 1e-12.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fmid = fn(mid);
        if (fmid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

IndexPair tau1(double bigN) {
    if (!(bigN > 0.0)) {
        throw DomainError("tau1 requires N > 0");
    }
    const double lo = 0.5;
    const double hi = 1.0 / std::sqrt(2.0);
    return {bisect_decreasing_root([&](double t) { return psi1(t, bigN); }, lo, hi, "psi1"),
            bisect_decreasing_root([&](double t) { return psi2(t, bigN); }, lo, hi, "psi2")};
}

SolvabilityBounds beta_pm(const SystemParams& params) {
    validate_competitive(params);
    const double tau = params.tau;
    const double n1 = params.bigN + 1.0;
    const IndexPair star = beta_star(params);
    const IndexPair sstar = beta_star_star(params);
    const IndexPair t0 = tau0(params.bigN);
    const IndexPair t1 = tau1(params.bigN);
    const Extremes ext = beta_extremes(params);

    SolvabilityBounds b;
    if (tau <= t0.first) {
        b.minus1 = 4.0 * n1;
    } else if (tau <= 0.5) {
        b.minus1 = sstar.first;
    } else if (tau < t1.second) {
        b.minus1 = star.first;
    } else {
        b.minus1 = ext.under1;
    }

    if (tau <= 0.5) {
        b.plus1 = star.first;
    } else if (tau < t1.first) {
        b.plus1 = sstar.first;
    } else {
        b.plus1 = ext.over1;
    }

    if (tau <= t0.second) {
        b.minus2 = 4.0;
    } else if (tau <= 0.5) {
        b.minus2 = sstar.second;
    } else if (tau < t1.first) {
        b.minus2 = star.second;
    } else {
        b.minus2 = ext.under2;
    }

    if (tau <= 0.5) {
        b.plus2 = star.second;
    } else if (tau < t1.second) {
        b.plus2 = sstar.second;
    } else {
        b.plus2 = ext.over2;
    }
    return b;
}

ShootingLimits beta_limits(const SystemParams& params) {
    validate_competitive(params);
    const double tau = params.tau;
    const double n1 = params.bigN + 1.0;
    const IndexPair star = beta_star(params);
    const IndexPair sstar = beta_star_star(params);
    const IndexPair t0 = tau0(params.bigN);
    const IndexPair t1 = tau1(params.bigN);
    const Extremes ext = beta_extremes(params);

    ShootingLimits lim;
    lim.minus1 = tau < t1.second ? star.first : ext.under1;
    if (tau <= t0.second) {
        lim.minus2 = 4.0;
    } else if (tau < t1.second) {
        lim.minus2 = sstar.second;
    } else {
        lim.minus2 = ext.over2;
    }

    lim.plus2 = tau < t1.first ? star.second : ext.under2;
    if (tau <= t0.first) {
        lim.plus1 = 4.0 * n1;
    } else if (tau < t1.first) {
        lim.plus1 = sstar.first;
    } else {
        lim.plus1 = ext.over1;
    }
    return lim;
}

ThresholdSet thresholds(const SystemParams& params) {
    validate_competitive(params);
    ThresholdSet t;
    t.discriminant = discriminant(params);
    t.extremes = beta_extremes(params);
    t.star = beta_star(params);
    t.star_star = beta_star_star(params);
    t.tau0 = tau0(params.bigN);
    t.tau1 = tau1(params.bigN);
    t.bounds = beta_pm(params);
    t.limits = beta_limits(params);
    return t;
}

PointClass classify_point(double beta1, double beta2, const SystemParams& params, double tol) {
    PointClass pc;
    pc.residual = ellipse_residual(beta1, beta2, params);
    pc.margin1 = beta1 - params.tau * beta2 - 2.0 * (params.bigN + 1.0);
    pc.margin2 = beta2 - params.tau * beta1 - 2.0;
    if (std::abs(pc.residual) > tol * residual_scale(beta1, beta2)) {
        pc.branch = EllipseBranch::off_ellipse;
        return pc;
    }
    const double mtol = tol * (1.0 + std::abs(beta1) + std::abs(beta2));
    const bool open1 = pc.margin1 > mtol;
    const bool open2 = pc.margin2 > mtol;
    if (open1 && open2) {
        pc.branch = EllipseBranch::interior;
    } else if (!open1 && open2) {
        pc.branch = EllipseBranch::lower_left;
    } else if (open1 && !open2) {
        pc.branch = EllipseBranch::lower_right;
    } else {
        pc.branch = EllipseBranch::off_ellipse;
    }
    return pc;
}

SolvabilityReport solvable_radial(double beta1, double beta2, const SystemParams& params,
                                  double tol) {
    SolvabilityReport rep;
    if (!(params.tau > 0.0 && params.tau < 1.0) || !(params.bigN > 0.0)) {
        rep.failure = "tau outside (0, 1) or N not positive";
        return rep;
    }
    const double n2 = params.bigN + 2.0;
    if (is_half(params.tau)) {
        rep.toda_case = true;
        rep.lower = rep.upper = rep.branch_value = 4.0 * n2;
        const double d1 = std::abs(beta1 - 4.0 * n2);
        rep.branch_deviation = std::abs(beta2 - 4.0 * n2);
        rep.in_interval = d1 <= tol * (1.0 + std::abs(beta1));
        rep.on_branch = rep.branch_deviation <= tol * (1.0 + std::abs(beta2));
        rep.solvable = rep.in_interval && rep.on_branch;
        if (!rep.solvable) {
            rep.failure = "at tau = 1/2 only beta1 = beta2 = 4(N+2) is admissible";
        }
        return rep;
    }

    const SolvabilityBounds b = beta_pm(params);
    rep.lower = b.minus1;
    rep.upper = b.plus1;
    rep.in_interval = beta1 > b.minus1 && beta1 < b.plus1;
    rep.near_endpoint = std::min(std::abs(beta1 - b.minus1), std::abs(beta1 - b.plus1)) <=
                        tol * (1.0 + std::abs(beta1));
    try {
        rep.branch_value = phi1(beta1, Sign::plus, params);
        rep.branch_deviation = std::abs(beta2 - rep.branch_value);
        rep.on_branch = rep.branch_deviation <= tol * (1.0 + std::abs(beta2));
    } catch (const DomainError&) {
        rep.branch_value = std::numeric_limits<double>::quiet_NaN();
        rep.branch_deviation = std::numeric_limits<double>::infinity();
        rep.on_branch = false;
    }
    rep.solvable = rep.in_interval && rep.on_branch;
    if (!rep.in_interval) {
        std::ostringstream os;
        os << "beta1 = " << beta1 << " not in open interval (" << b.minus1 << ", " << b.plus1 << ")";
        rep.failure = os.str();
    } else if (!rep.on_branch) {
        std::ostringstream os;
        os << "beta2 = " << beta2 << " differs from phi1+(beta1) = " << rep.branch_value;
        rep.failure = os.str();
    }
    return rep;
}

bool ConditionReport::all_passed() const {
    return tau_range.passed && ellipse.passed && integrability1.passed && integrability2.passed &&
           radial1.passed && radial2.passed;
}

ConditionReport necessary_conditions(double beta1, double beta2, const SystemParams& params,
                                     double tol) {
    const double tau = params.tau;
    const double n1 = params.bigN + 1.0;
    ConditionReport r;
    r.tau_range = {tau > 0.0 && tau < 1.0, std::min(tau, 1.0 - tau)};
    const double res = ellipse_residual(beta1, beta2, params);
    r.ellipse = {std::abs(res) <= tol * residual_scale(beta1, beta2), res};
    const double m1 = beta1 - tau * beta2 - 2.0 * n1;
    const double m2 = beta2 - tau * beta1 - 2.0;
    r.integrability1 = {m1 > 0.0, m1};
    r.integrability2 = {m2 > 0.0, m2};
    const double q1 = beta1 - 4.0 * n1;
    const double q2 = beta2 - 4.0;
    r.radial1 = {q1 > 0.0, q1};
    r.radial2 = {q2 > 0.0, q2};
    return r;
}

FluxBoundsReport flux_bounds_check(double beta1, double beta2, const SystemParams& params,
                                   double tol) {
    validate_competitive(params);
    FluxBoundsReport rep;
    const double tau = params.tau;
    const double slack = tol * residual_scale(beta1, beta2);
    const IndexPair star = beta_star(params);
    const IndexPair sstar = beta_star_star(params);
    const IndexPair t1 = tau1(params.bigN);
    std::ostringstream os;
    auto require = [&](bool ok, const char* what) {
        if (!ok) {
            ++rep.violations;
            os << what << "; ";
        }
    };
    if (tau < 0.5) {
        rep.below_half = true;
        require(beta1 <= star.first + slack, "beta1 > beta*_1");
        require(beta2 <= star.second + slack, "beta2 > beta*_2");
    }
    if (tau > 0.5 && tau < t1.second) {
        rep.above_half_index2 = true;
        require(beta2 <= sstar.second + slack, "beta2 > beta**_2");
        require(beta1 >= star.first - slack, "beta1 < beta*_1");
    }
    if (tau > 0.5 && tau < t1.first) {
        rep.above_half_index1 = true;
        require(beta1 <= sstar.first + slack, "beta1 > beta**_1");
        require(beta2 >= star.second - slack, "beta2 < beta*_2");
    }
    rep.detail = os.str();
    return rep;
}

}  // namespace liouville::algebra
