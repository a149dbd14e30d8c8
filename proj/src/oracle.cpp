#include "liouville/oracle.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace liouville::oracle {

namespace {

void require_exponent(double bigN) {
    if (!(bigN > 0.0) || !std::isfinite(bigN)) throw DomainError("vortex exponent N must be positive");
}

void require_radius(double r) {
    if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
}

// log(1 + e^x) without overflow.
double log1p_exp(double x) { return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// X/(1+X) for X = e^x.
double saturation(double x) { return x > 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

double log_scale(double bigN) { return std::log(8.0 * (bigN + 1.0) * (bigN + 1.0)); }

}  // namespace

double xi_profile(double bigN, double r) {
    require_exponent(bigN);
    require_radius(r);
    if (r == 0.0) return 0.0;
    return -2.0 * log1p_exp(2.0 * (bigN + 1.0) * std::log(r) - log_scale(bigN));
}

double xi_log_derivative(double bigN, double r) {
    require_exponent(bigN);
    require_radius(r);
    if (r == 0.0) return 0.0;
    return -4.0 * (bigN + 1.0) * saturation(2.0 * (bigN + 1.0) * std::log(r) - log_scale(bigN));
}

double xi_partial_flux(double bigN, double R) {
    require_exponent(bigN);
    require_radius(R);
    if (R == 0.0) return 0.0;
    return 4.0 * (bigN + 1.0) * saturation(2.0 * (bigN + 1.0) * std::log(R) - log_scale(bigN));
}

double radial_family_regular(double bigN, double mu, double r) {
    require_exponent(bigN);
    require_radius(r);
    if (!(mu > 0.0)) throw DomainError("family scale mu must be positive");
    const double base = log_scale(bigN) + std::log(mu);
    if (r == 0.0) return base;
    return base - 2.0 * log1p_exp(std::log(mu) + 2.0 * (bigN + 1.0) * std::log(r));
}

double radial_family(double bigN, double mu, double r) {
    const double v = radial_family_regular(bigN, mu, r);
    if (r == 0.0) return -HUGE_VAL;
    return v + 2.0 * bigN * std::log(r);
}

double family_mu(double bigN, double alpha) {
    require_exponent(bigN);
    return std::exp(alpha - log_scale(bigN));
}

XiScaling xi_scaling(double bigN, double mu) {
    require_exponent(bigN);
    if (!(mu > 0.0)) throw DomainError("family scale mu must be positive");
    const double log_c2n2 = log_scale(bigN) + std::log(mu); // c^{2N+2} = 8(N+1)^2 mu
    return {std::exp(log_c2n2 / (2.0 * (bigN + 1.0))), log_c2n2};
}

FluxPair toda_reference(double bigN) {
    require_exponent(bigN);
    const double b = 4.0 * (bigN + 2.0);
    return {b, b, 0.0, 0.0};
}

ode::RadialState decoupled_state(double bigN, double alpha, double t) {
    require_exponent(bigN);
    const double n1 = bigN + 1.0;
    const double x1 = std::log(family_mu(bigN, alpha)) + 2.0 * n1 * t;
    const double x2 = 2.0 * t - std::log(8.0);
    ode::RadialState s;
    s.t = t;
    s.z = alpha - 2.0 * log1p_exp(x1);
    s.u = -2.0 * log1p_exp(x2);
    s.f = 4.0 * n1 * saturation(x1);
    s.g = 4.0 * saturation(x2);
    s.dz = -s.f;
    s.du = -s.g;
    return s;
}

QuadratureResult integrate_finite(const std::function<double(double)>& integrand, double R,
                                  double tol) {
    require_radius(R);
    QuadratureResult out;
    double err = 0.0;
    out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, R, 20,
                                                                              tol, &err);
    out.error = err;
    return out;
}

QuadratureResult family_flux(double bigN, double mu, double tol) {
    require_exponent(bigN);
    if (!(mu > 0.0)) throw DomainError("family scale mu must be positive");
    const double n1 = bigN + 1.0;
    const double x_cut = 1e6;
    const double R = std::pow(x_cut / mu, 1.0 / (2.0 * n1));
    auto integrand = [=](double r) {
        if (r == 0.0) return 0.0;
        const double x = mu * std::pow(r, 2.0 * n1);
        return 8.0 * n1 * n1 * mu * std::pow(r, 2.0 * bigN + 1.0) / ((1.0 + x) * (1.0 + x));
    };
    // Split at the peak scale so each piece is smooth on its own length.
    const double peak = std::pow(1.0 / mu, 1.0 / (2.0 * n1));
    double e1 = 0.0, e2 = 0.0;
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    QuadratureResult out;
    out.value = gk::integrate(integrand, 0.0, peak, 20, tol, &e1) +
                gk::integrate(integrand, peak, R, 20, tol, &e2);
    // 4(N+1) int_X^inf (1+x)^{-2} dx = 4(N+1) sum_k (-1)^k X^{-k-1}
    double tail = 0.0;
    double term = 1.0 / x_cut;
    for (int k = 0; k < 4; ++k) {
        tail += (k % 2 == 0 ? 1.0 : -1.0) * term;
        term /= x_cut;
    }
    out.tail = 4.0 * n1 * tail;
    out.value += out.tail;
    out.error = e1 + e2 + 4.0 * n1 * term;
    return out;
}

QuadratureResult xi_flux(double bigN, double R, double tol) {
    require_exponent(bigN);
    const double n1 = bigN + 1.0;
    auto integrand = [=](double r) {
        if (r == 0.0) return 0.0;
        return std::pow(r, 2.0 * bigN + 1.0) * std::exp(xi_profile(bigN, r));
    };
    QuadratureResult out = integrate_finite(integrand, R, tol);
    out.tail = 4.0 * n1 - xi_partial_flux(bigN, R);
    return out;
}

}  // namespace liouville::oracle
