#include "liouville/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace liouville::ode {

namespace {

constexpr double kExpCeiling = 700.0;
constexpr double kRescaleThreshold = 40.0;

using Vec = std::array<double, 6>; // z, u, dz, du, f, g

Vec pack(const RadialState& s) { return {s.z, s.u, s.dz, s.du, s.f, s.g}; }

RadialState unpack(double t, const Vec& y) { return {t, y[0], y[1], y[2], y[3], y[4], y[5]}; }

// Right-hand side without throwing; false when a source overflows.
bool eval(double t, const Vec& y, const SystemParams& p, Vec& out) {
    const double e1 = 2.0 * (p.bigN + 1.0) * t + y[0];
    const double e2 = 2.0 * t + y[1];
    if (!(e1 < kExpCeiling) || !(e2 < kExpCeiling)) return false;
    const double F = std::exp(e1);
    const double G = std::exp(e2);
    out = {y[2], y[3], -F + p.tau * G, -G + p.tau * F, F, G};
    return true;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    bool ok = false;
    Vec y;
    Vec k7;
    double err = 0.0;
};

StepResult dp_step(double t, const Vec& y, const Vec& k1, double h, const SystemParams& p,
                   const IntegratorConfig& cfg) {
    StepResult r;
    Vec k2, k3, k4, k5, k6, tmp;
    auto combo = [&](auto&& fn) {
        for (std::size_t i = 0; i < 6; ++i) tmp[i] = y[i] + h * fn(i);
    };
    combo([&](std::size_t i) { return a21 * k1[i]; });
    if (!eval(t + c2 * h, tmp, p, k2)) return r;
    combo([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    if (!eval(t + c3 * h, tmp, p, k3)) return r;
    combo([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    if (!eval(t + c4 * h, tmp, p, k4)) return r;
    combo([&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
    if (!eval(t + c5 * h, tmp, p, k5)) return r;
    combo([&](std::size_t i) {
        return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
    });
    if (!eval(t + h, tmp, p, k6)) return r;
    combo([&](std::size_t i) {
        return b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i];
    });
    r.y = tmp;
    if (!eval(t + h, r.y, p, r.k7)) return r;

    double sum = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        const double ei =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * r.k7[i]);
        const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(r.y[i]));
        sum += (ei / sk) * (ei / sk);
    }
    r.err = std::sqrt(sum / 6.0);
    r.ok = std::isfinite(r.err);
    return r;
}

Sample make_sample(const RadialState& s, const SystemParams& p) { return {s, pohozaev_psi(s, p)}; }

}  // namespace

double source1(const RadialState& s, const SystemParams& params) {
    return std::exp(2.0 * (params.bigN + 1.0) * s.t + s.z);
}

double source2(const RadialState& s, const SystemParams& /*params*/) {
    return std::exp(2.0 * s.t + s.u);
}

StateDerivative rhs(const RadialState& s, const SystemParams& params) {
    Vec out;
    if (!eval(s.t, pack(s), params, out)) {
        std::ostringstream msg;
        msg << "exponential source overflow at t = " << s.t;
        throw IntegrationError(msg.str(), s.t);
    }
    return {out[0], out[1], out[2], out[3], out[4], out[5]};
}

PsiValues pohozaev_psi(const RadialState& s, const SystemParams& params) {
    const double F = source1(s, params);
    const double G = source2(s, params);
    const double n1 = params.bigN + 1.0;
    const double psi1 = F - 2.0 * n1 * s.f + 0.5 * s.f * s.f;
    const double psi2 = G - 2.0 * s.g + 0.5 * s.g * s.g;
    return {psi1 + psi2 - params.tau * s.f * s.g, psi1, psi2};
}

double launch_remainder(const SystemParams& params, LaunchData data, double r0) {
    const double lr = std::log(r0);
    const double a = std::exp(data.v1_origin + 2.0 * (params.bigN + 1.0) * lr);
    const double b = std::exp(data.v2_origin + 2.0 * lr);
    return a * a + a * b + b * b;
}

double suggested_launch_radius(const SystemParams& params, LaunchData data, double tolerance) {
    validate(params);
    if (!(tolerance > 0.0)) throw PreconditionError("launch tolerance must be positive");
    const double n1 = params.bigN + 1.0;
    double hi = std::min({std::log(0.3), std::log(0.3) - data.v1_origin / (2.0 * n1),
                          std::log(0.3) - data.v2_origin / 2.0});
    if (launch_remainder(params, data, std::exp(hi)) <= tolerance) return std::exp(hi);
    double lo = hi - 400.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (launch_remainder(params, data, std::exp(mid)) <= tolerance)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(lo);
}

RadialState series_launch(const SystemParams& params, LaunchData data, double r0,
                          double tolerance) {
    validate(params);
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw PreconditionError("launch radius must be positive");
    const double rem = launch_remainder(params, data, r0);
    if (!(rem <= tolerance)) {
        const double suggested = suggested_launch_radius(params, data, tolerance);
        std::ostringstream msg;
        msg << "launch radius " << r0 << " leaves remainder " << rem << " above tolerance "
            << tolerance << "; use r0 <= " << suggested;
        throw LaunchError(msg.str(), suggested);
    }
    const double n1 = params.bigN + 1.0;
    const double t0 = std::log(r0);
    const double A = std::exp(data.v1_origin + 2.0 * n1 * t0);
    const double B = std::exp(data.v2_origin + 2.0 * t0);
    RadialState s;
    s.t = t0;
    s.f = A / (2.0 * n1);
    s.g = B / 2.0;
    s.z = data.v1_origin - A / (4.0 * n1 * n1) + params.tau * B / 4.0;
    s.u = data.v2_origin - B / 4.0 + params.tau * A / (4.0 * n1 * n1);
    s.dz = -(s.f - params.tau * s.g);
    s.du = -(s.g - params.tau * s.f);
    return s;
}

RadialState series_launch(const SystemParams& params, double alpha, double r0, double tolerance) {
    return series_launch(params, LaunchData{alpha, 0.0}, r0, tolerance);
}

TailEstimate tail_correction(const RadialState& s, const SystemParams& params) {
    TailEstimate out;
    const double tau = params.tau;
    out.sigma1 = s.f - tau * s.g;
    out.sigma2 = s.g - tau * s.f;
    const double m1 = out.sigma1 - 2.0 * (params.bigN + 1.0);
    const double m2 = out.sigma2 - 2.0;
    if (!(m1 > 1e-9 * (1.0 + std::abs(out.sigma1))) || !(m2 > 1e-9 * (1.0 + std::abs(out.sigma2))))
        return out;
    const double F = source1(s, params);
    const double G = source2(s, params);
    double T1 = F / m1;
    double T2 = G / m2;
    for (int i = 0; i < 200; ++i) {
        const double d1 = m1 - tau * T2;
        const double d2 = m2 - tau * T1;
        if (!(d1 > 0.5 * m1) || !(d2 > 0.5 * m2)) return out;
        const double n1 = F / d1;
        const double n2 = G / d2;
        const bool done = std::abs(n1 - T1) <= 1e-15 * n1 && std::abs(n2 - T2) <= 1e-15 * n2;
        T1 = n1;
        T2 = n2;
        if (done) break;
    }
    if (!std::isfinite(T1) || !std::isfinite(T2)) return out;
    out.available = true;
    out.bound1 = T1;
    out.bound2 = T2;
    out.lower1 = F / (m1 + T1);
    out.lower2 = G / (m2 + T2);
    return out;
}

Trajectory integrate(const SystemParams& params, LaunchData data, const IntegratorConfig& cfg) {
    validate(params);
    if (!std::isfinite(data.v1_origin) || !std::isfinite(data.v2_origin))
        throw PreconditionError("initial values must be finite");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.tail_tol > 0.0))
        throw PreconditionError("integrator tolerances must be positive");

    Trajectory tr;
    tr.params = params;
    tr.alpha = data.v1_origin;
    tr.launch = data;

    const double n1 = params.bigN + 1.0;
    const double d = data.v1_origin - n1 * data.v2_origin;
    double shift = 0.0; // original t = rescaled t + shift
    if (std::abs(d) >= kRescaleThreshold) {
        shift = d >= 0.0 ? -data.v1_origin / (2.0 * n1) : -data.v2_origin / 2.0;
        tr.rescaled = true;
    }
    const LaunchData local{data.v1_origin + 2.0 * n1 * shift, data.v2_origin + 2.0 * shift};
    auto to_original = [&](RadialState s) {
        s.t += shift;
        s.z -= 2.0 * n1 * shift;
        s.u -= 2.0 * shift;
        return s;
    };

    const double r0 = suggested_launch_radius(params, local, cfg.launch_tol);
    RadialState start = series_launch(params, local, r0, cfg.launch_tol);
    const double t_stop = cfg.t_max - shift;

    double t = start.t;
    Vec y = pack(start);
    Vec k1;
    if (!eval(t, y, params, k1)) throw IntegrationError("source overflow at launch", t + shift);
    tr.samples.push_back(make_sample(to_original(start), params));

    double h = 1e-2;
    const double h_max = 1.0;
    double err_old = 1e-4;
    TailEstimate tail;
    bool finished = false;

    while (!finished) {
        if (t >= t_stop) break;
        if (tr.accepted_steps + tr.rejected_steps >= cfg.max_steps) {
            tr.status = "step budget exhausted";
            break;
        }
        h = std::min({h, h_max, t_stop - t});
        const StepResult step = dp_step(t, y, k1, h, params, cfg);
        if (!step.ok || step.err > 1.0) {
            ++tr.rejected_steps;
            const double fac =
                step.ok ? std::max(0.2, 0.9 * std::pow(step.err, -0.17)) : 0.1;
            h *= fac;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                std::ostringstream msg;
                msg << "step size collapsed at t = " << t + shift;
                throw IntegrationError(msg.str(), t + shift);
            }
            continue;
        }
        ++tr.accepted_steps;
        t += h;
        y = step.y;
        k1 = step.k7;
        const RadialState now = unpack(t, y);
        tr.samples.push_back(make_sample(to_original(now), params));

        const double e = std::max(step.err, 1e-10);
        const double fac = std::clamp(0.9 * std::pow(e, -0.17) * std::pow(err_old, 0.04), 0.2, 10.0);
        err_old = std::max(step.err, 1e-4);
        h *= fac;

        tail = tail_correction(now, params);
        if (tail.available && tail.bound1 <= cfg.tail_tol && tail.bound2 <= cfg.tail_tol) {
            tr.converged = true;
            finished = true;
        }
    }

    const RadialState last = tr.samples.back().state;
    tr.t_end = last.t;
    tr.sigma1 = last.f - params.tau * last.g;
    tr.sigma2 = last.g - params.tau * last.f;
    tail = tail_correction(last, params);
    if (tail.available) {
        tr.flux.beta1 = last.f + tail.correction1();
        tr.flux.beta2 = last.g + tail.correction2();
        tr.flux.err1 = tail.error1() + cfg.rel_tol * tr.flux.beta1;
        tr.flux.err2 = tail.error2() + cfg.rel_tol * tr.flux.beta2;
    } else {
        tr.flux.beta1 = last.f;
        tr.flux.beta2 = last.g;
        tr.flux.err1 = std::numeric_limits<double>::infinity();
        tr.flux.err2 = std::numeric_limits<double>::infinity();
    }
    if (tr.converged) {
        tr.status = "converged";
    } else if (tr.status.empty()) {
        std::ostringstream msg;
        msg << "t_max = " << cfg.t_max << " reached before tail convergence";
        tr.status = msg.str();
    }
    return tr;
}

Trajectory integrate(const SystemParams& params, double alpha, const IntegratorConfig& config) {
    return integrate(params, LaunchData{alpha, 0.0}, config);
}

}  // namespace liouville::ode
