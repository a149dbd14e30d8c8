#include "liouville/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace liouville::verify {

namespace {

struct RPoint {
    double r0, r1, h, dr0, dr1;
};

RPoint r_point(const ode::RadialState& s, const SystemParams& p) {
    const double tau = p.tau;
    const double n1 = p.bigN + 1.0;
    const double F = ode::source1(s, p);
    const double G = ode::source2(s, p);
    const double star1 = 4.0 * n1 + 8.0 * tau;
    const double h = F + 0.5 * s.f * (s.f - star1);
    const double r0 = 2.0 * tau * F * (s.g - 4.0) + (s.f - 4.0 * n1) * h;
    const double r1 =
        2.0 * tau * G * (s.f - star1) + s.g * (G + 0.5 * (s.g - 4.0) * (s.g - 2.0 * tau * star1));
    const double k = -(1.0 - 2.0 * tau);
    const double dr0 = k * F * (0.5 * (1.0 + 2.0 * tau) * s.g * (s.g - 4.0) + G);
    const double dr1 = k * G * (F + 0.5 * (1.0 + 2.0 * tau) * s.f * (s.f - star1));
    return {r0, r1, h, dr0, dr1};
}

// Second-order derivative on a nonuniform grid.
double centered(const std::vector<double>& t, const std::vector<double>& y, std::size_t i) {
    const double hm = t[i] - t[i - 1];
    const double hp = t[i + 1] - t[i];
    return (hm * hm * (y[i + 1] - y[i]) + hp * hp * (y[i] - y[i - 1])) / (hm * hp * (hm + hp));
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

DiagnosticsProfile psi_profile(const ode::Trajectory& traj) {
    DiagnosticsProfile out;
    const std::size_t n = traj.samples.size();
    out.t.reserve(n);
    out.psi0.reserve(n);
    out.psi1.reserve(n);
    out.psi2.reserve(n);
    out.min_psi1 = std::numeric_limits<double>::infinity();
    out.min_psi2 = std::numeric_limits<double>::infinity();
    for (const auto& sample : traj.samples) {
        const auto psi = ode::pohozaev_psi(sample.state, traj.params);
        out.t.push_back(sample.state.t);
        out.psi0.push_back(psi.psi0);
        out.psi1.push_back(psi.psi1);
        out.psi2.push_back(psi.psi2);
        const double scale = 1.0 + sample.state.f * sample.state.f + sample.state.g * sample.state.g;
        out.max_abs_psi0 = std::max(out.max_abs_psi0, std::abs(psi.psi0));
        out.max_scaled_psi0 = std::max(out.max_scaled_psi0, std::abs(psi.psi0) / scale);
        out.min_psi1 = std::min(out.min_psi1, psi.psi1);
        out.min_psi2 = std::min(out.min_psi2, psi.psi2);
    }
    if (n > 0) out.final_psi0 = out.psi0.back();
    return out;
}

RQuantities r_quantities(const ode::Trajectory& traj, double monotone_tol) {
    RQuantities out;
    const auto& p = traj.params;
    const std::size_t n = traj.samples.size();
    std::vector<double> t(n);
    out.r0.resize(n);
    out.r1.resize(n);
    out.h.resize(n);
    out.dr0.resize(n);
    out.dr1.resize(n);
    out.dr0_fd.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.dr1_fd.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj.samples[i].state;
        const RPoint q = r_point(s, p);
        t[i] = s.t;
        out.r0[i] = q.r0;
        out.r1[i] = q.r1;
        out.h[i] = q.h;
        out.dr0[i] = q.dr0;
        out.dr1[i] = q.dr1;
        if (out.g_crosses_4 < 0 && s.g >= 4.0) out.g_crosses_4 = static_cast<std::ptrdiff_t>(i);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out.dr0_fd[i] = centered(t, out.r0, i);
        out.dr1_fd[i] = centered(t, out.r1, i);
        const double m0 = std::abs(out.dr0_fd[i] - out.dr0[i]) / (1.0 + std::abs(out.dr0[i]));
        const double m1 = std::abs(out.dr1_fd[i] - out.dr1[i]) / (1.0 + std::abs(out.dr1[i]));
        out.max_fd_mismatch = std::max({out.max_fd_mismatch, m0, m1});
        out.max_local_step = std::max({out.max_local_step, t[i] - t[i - 1], t[i + 1] - t[i]});
    }
    if (out.g_crosses_4 >= 0) {
        const auto start = static_cast<std::size_t>(out.g_crosses_4);
        int last_sign = sign_of(out.h[start]);
        for (std::size_t i = start + 1; i < n; ++i) {
            if (out.r0[i] - out.r0[i - 1] > monotone_tol * (1.0 + std::abs(out.r0[i - 1])))
                ++out.r0_increase_count;
            const int s = sign_of(out.h[i]);
            if (s != 0 && last_sign != 0 && s != last_sign) ++out.h_sign_changes;
            if (s != 0) last_sign = s;
        }
    }
    if (n > 0) out.final_difference = out.r1.back() - out.r0.back();
    const double b1 = traj.flux.beta1;
    const double b2 = traj.flux.beta2;
    const double star1 = 4.0 * (p.bigN + 1.0) + 8.0 * p.tau;
    const double starstar2 = 2.0 * p.tau * star1;
    out.predicted_difference = 0.5 * b2 * (b2 - 4.0) * (b2 - starstar2) -
                               0.5 * b1 * (b1 - 4.0 * (p.bigN + 1.0)) * (b1 - star1);
    return out;
}

DiagnosticsProfile diagnostics(const ode::Trajectory& traj) {
    DiagnosticsProfile out = psi_profile(traj);
    RQuantities rq = r_quantities(traj);
    out.r0 = std::move(rq.r0);
    out.r1 = std::move(rq.r1);
    out.h = std::move(rq.h);
    return out;
}

DecayReport decay_check(const ode::Trajectory& traj) {
    if (!traj.converged)
        throw PreconditionError("decay check needs a converged trajectory (" + traj.status + ")");
    if (traj.samples.empty()) throw PreconditionError("trajectory has no samples");
    const auto& s = traj.samples.back().state;
    const auto& p = traj.params;
    DecayReport out;
    out.sigma1 = -s.dz;
    out.sigma2 = -s.du;
    const double ref1 = traj.flux.beta1 - p.tau * traj.flux.beta2;
    const double ref2 = traj.flux.beta2 - p.tau * traj.flux.beta1;
    out.deviation = std::max(std::abs(out.sigma1 - ref1), std::abs(out.sigma2 - ref2));
    out.margin1 = out.sigma1 - 2.0 * (p.bigN + 1.0);
    out.margin2 = out.sigma2 - 2.0;
    out.above_thresholds = out.margin1 > 0.0 && out.margin2 > 0.0;
    return out;
}

double determinant(const GeneralSystem& sys) { return sys.k11 * sys.k22 - sys.k12 * sys.k21; }

bool competitive(const GeneralSystem& sys) {
    return sys.k11 > 0.0 && sys.k22 > 0.0 && sys.k12 < 0.0 && sys.k21 < 0.0;
}

double general_pohozaev_residual(const GeneralSystem& sys, double beta1, double beta2) {
    if (sys.k12 * sys.k21 < 0.0)
        throw PreconditionError("Pohozaev identity needs k12 * k21 >= 0");
    const double a21 = std::abs(sys.k21);
    const double a12 = std::abs(sys.k12);
    return sys.k11 * a21 * beta1 * beta1 + sys.k22 * a12 * beta2 * beta2 +
           2.0 * sys.k12 * a21 * beta1 * beta2 - 4.0 * (sys.n1 + 1.0) * a21 * beta1 -
           4.0 * (sys.n2 + 1.0) * a12 * beta2;
}

double symmetric_pohozaev_residual(const GeneralSystem& sys, double beta1, double beta2) {
    if (sys.k12 != sys.k21) throw PreconditionError("symmetric identity needs k12 == k21");
    return sys.k11 * beta1 * beta1 + sys.k22 * beta2 * beta2 + 2.0 * sys.k12 * beta1 * beta2 -
           4.0 * (sys.n1 + 1.0) * beta1 - 4.0 * (sys.n2 + 1.0) * beta2;
}

Symmetrized symmetrize(const GeneralSystem& sys) {
    if (sys.k12 == 0.0 || sys.k21 == 0.0 || sys.k12 * sys.k21 < 0.0)
        throw PreconditionError("symmetrization needs k12, k21 nonzero with equal sign");
    const double a21 = std::abs(sys.k21);
    const double a12 = std::abs(sys.k12);
    const double s = sys.k12 > 0.0 ? 1.0 : -1.0;
    Symmetrized out;
    out.system = {sys.k11 / a21, s, s, sys.k22 / a12, sys.n1, sys.n2};
    out.flux_scale1 = a21;
    out.flux_scale2 = a12;
    return out;
}

Normalization normalize_general(const GeneralSystem& sys) {
    if (!(sys.k11 > 0.0) || !(sys.k22 > 0.0))
        throw PreconditionError("normalization needs k11 > 0 and k22 > 0");
    Normalization out;
    out.tau1 = -sys.k12 / sys.k22;
    out.tau2 = -sys.k21 / sys.k11;
    out.flux_scale1 = sys.k11;
    out.flux_scale2 = sys.k22;
    out.symmetric = std::abs(out.tau1 - out.tau2) <= 1e-12;
    if (out.symmetric && sys.n2 == 0.0 && sys.n1 > 0.0) {
        const double tau = 0.5 * (out.tau1 + out.tau2);
        if (tau >= 0.0 && tau < 1.0) out.params = SystemParams{tau, sys.n1};
    }
    return out;
}

InfinityReport beta_infty(const GeneralSystem& sys, double beta1, double beta2) {
    InfinityReport out;
    out.beta1_infty = sys.k11 * beta1 + sys.k12 * beta2;
    out.beta2_infty = sys.k22 * beta2 + sys.k21 * beta1;
    out.margin1 = out.beta1_infty - 2.0 * (sys.n1 + 1.0);
    out.margin2 = out.beta2_infty - 2.0 * (sys.n2 + 1.0);
    out.holds1 = out.margin1 > 0.0;
    out.holds2 = out.margin2 > 0.0;
    std::ostringstream msg;
    if (!out.holds1) msg << "index 1 fails by " << -out.margin1;
    if (!out.holds2) msg << (out.holds1 ? "" : "; ") << "index 2 fails by " << -out.margin2;
    out.detail = msg.str();
    return out;
}

}  // namespace liouville::verify
