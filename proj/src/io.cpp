#include "liouville/io.hpp"

#include <charconv>
#include <cmath>

namespace liouville::io {

namespace {

// JSON has no non-finite numbers; they serialize as null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void csv_row(std::ostream& os, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) os << ',';
        os << format_double(v);
        first = false;
    }
}

Json check(const algebra::ConditionCheck& c) {
    return Json{{"passed", c.passed}, {"margin", number(c.margin)}};
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const ode::Trajectory& traj) {
    const verify::DiagnosticsProfile prof = verify::diagnostics(traj);
    os << "t,r,v1,v2,rv1p,rv2p,f1,f2,psi0,psi1,psi2,r0q,r1q,hq\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i].state;
        csv_row(os, {s.t, std::exp(s.t), s.z, s.u, s.dz, s.du, s.f, s.g, prof.psi0[i], prof.psi1[i],
                     prof.psi2[i], prof.r0[i], prof.r1[i], prof.h[i]});
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const shooting::SweepResult& result) {
    os << "alpha,beta1,beta2,err1,err2,residual,converged\n";
    for (const auto& p : result.points) {
        csv_row(os, {p.alpha, p.flux.beta1, p.flux.beta2, p.flux.err1, p.flux.err2, p.residual});
        os << ',' << (p.converged && !p.failed ? 1 : 0) << '\n';
    }
}

void write_curve_csv(std::ostream& os, const SystemParams& params, int samples) {
    validate_competitive(params);
    if (samples < 2) throw PreconditionError("curve needs at least two samples");
    const auto ext = algebra::beta_extremes(params);
    os << "beta1,beta2,solvable\n";
    for (int i = 0; i < samples; ++i) {
        double b1 = ext.under1 + (ext.over1 - ext.under1) * i / (samples - 1);
        if (i == samples - 1) b1 = ext.over1;
        const double b2 = algebra::phi1(b1, algebra::Sign::plus, params);
        const bool ok = algebra::solvable_radial(b1, b2, params).solvable;
        csv_row(os, {b1, b2});
        os << ',' << (ok ? 1 : 0) << '\n';
    }
}

Json to_json(const FluxPair& flux) {
    return Json{{"beta1", number(flux.beta1)},
                {"beta2", number(flux.beta2)},
                {"err1", number(flux.err1)},
                {"err2", number(flux.err2)}};
}

Json to_json(const algebra::ConditionReport& r) {
    return Json{{"all_passed", r.all_passed()},
                {"tau_range", check(r.tau_range)},
                {"ellipse", check(r.ellipse)},
                {"integrability_1", check(r.integrability1)},
                {"integrability_2", check(r.integrability2)},
                {"radial_1", check(r.radial1)},
                {"radial_2", check(r.radial2)}};
}

Json to_json(const algebra::SolvabilityReport& r) {
    return Json{{"solvable", r.solvable},
                {"toda_case", r.toda_case},
                {"in_interval", r.in_interval},
                {"on_branch", r.on_branch},
                {"near_endpoint", r.near_endpoint},
                {"beta_minus_1", number(r.lower)},
                {"beta_plus_1", number(r.upper)},
                {"branch_value", number(r.branch_value)},
                {"branch_deviation", number(r.branch_deviation)},
                {"failure", r.failure}};
}

Json to_json(const algebra::FluxBoundsReport& r) {
    return Json{{"below_half", r.below_half},
                {"above_half_index2", r.above_half_index2},
                {"above_half_index1", r.above_half_index1},
                {"violations", r.violations},
                {"detail", r.detail}};
}

Json to_json(const shooting::SweepResult& result) {
    Json points = Json::array();
    for (const auto& p : result.points) {
        Json jp{{"alpha", p.alpha},
                {"flux", to_json(p.flux)},
                {"converged", p.converged && !p.failed},
                {"residual", number(p.residual)}};
        if (!p.error.empty()) jp["error"] = p.error;
        if (!p.failed) jp["conditions"] = to_json(p.conditions);
        points.push_back(std::move(jp));
    }
    auto limit = [](const shooting::LimitEstimate& e) {
        Json j{{"available", e.available}, {"points_used", e.points_used}};
        if (e.available) j["flux"] = to_json(e.flux);
        return j;
    };
    return Json{{"tau", result.params.tau},
                {"N", result.params.bigN},
                {"points", std::move(points)},
                {"limit_plus", limit(result.limit_plus)},
                {"limit_minus", limit(result.limit_minus)},
                {"all_converged", result.all_converged()}};
}

Json to_json(const shooting::LimitsReport& report) {
    auto side = [](const shooting::LadderDiagnostics& d) {
        Json ladder = Json::array();
        for (std::size_t i = 0; i < d.alphas.size(); ++i)
            ladder.push_back(Json{{"alpha", d.alphas[i]}, {"flux", to_json(d.values[i])}});
        Json j{{"ladder", std::move(ladder)},
               {"extrapolated", to_json(d.extrapolated)},
               {"target_1", number(d.target1)},
               {"target_2", number(d.target2)},
               {"rel_distance_1", number(d.rel_distance1)},
               {"rel_distance_2", number(d.rel_distance2)},
               {"monotone", d.monotone},
               {"approaching", d.approaching},
               {"converged", d.converged},
               {"reliable", d.reliable}};
        if (!d.note.empty()) j["note"] = d.note;
        return j;
    };
    return Json{{"alpha_max", report.alpha_max}, {"plus", side(report.plus)}, {"minus", side(report.minus)}};
}

Json to_json(const verify::Normalization& n) {
    Json j{{"tau_1", n.tau1},
           {"tau_2", n.tau2},
           {"flux_scale_1", n.flux_scale1},
           {"flux_scale_2", n.flux_scale2},
           {"symmetric", n.symmetric}};
    if (n.params) j["params"] = Json{{"tau", n.params->tau}, {"N", n.params->bigN}};
    return j;
}

Json to_json(const verify::InfinityReport& r) {
    return Json{{"beta_1_infty", number(r.beta1_infty)},
                {"beta_2_infty", number(r.beta2_infty)},
                {"margin_1", number(r.margin1)},
                {"margin_2", number(r.margin2)},
                {"holds_1", r.holds1},
                {"holds_2", r.holds2}};
}

Json coupling_thresholds_json(double bigN) {
    const auto t0 = algebra::tau0(bigN);
    const auto t1 = algebra::tau1(bigN);
    return Json{{"N", bigN},
                {"tau0_1", t0.first},
                {"tau0_2", t0.second},
                {"tau1_1", t1.first},
                {"tau1_2", t1.second}};
}

Json thresholds_json(const SystemParams& params) {
    const auto ts = algebra::thresholds(params);
    return Json{{"tau", params.tau},
                {"N", params.bigN},
                {"D", ts.discriminant},
                {"tau0_1", ts.tau0.first},
                {"tau0_2", ts.tau0.second},
                {"tau1_1", ts.tau1.first},
                {"tau1_2", ts.tau1.second},
                {"beta_under_1", ts.extremes.under1},
                {"beta_over_1", ts.extremes.over1},
                {"beta_under_2", ts.extremes.under2},
                {"beta_over_2", ts.extremes.over2},
                {"beta_star_1", ts.star.first},
                {"beta_star_2", ts.star.second},
                {"beta_starstar_1", ts.star_star.first},
                {"beta_starstar_2", ts.star_star.second},
                {"beta_minus_1", ts.bounds.minus1},
                {"beta_plus_1", ts.bounds.plus1},
                {"beta_minus_2", ts.bounds.minus2},
                {"beta_plus_2", ts.bounds.plus2},
                {"beta_lim_1_plus", ts.limits.plus1},
                {"beta_lim_2_plus", ts.limits.plus2},
                {"beta_lim_1_minus", ts.limits.minus1},
                {"beta_lim_2_minus", ts.limits.minus2}};
}

Json trajectory_summary_json(const ode::Trajectory& traj) {
    return Json{{"tau", traj.params.tau},
                {"N", traj.params.bigN},
                {"alpha", traj.alpha},
                {"flux", to_json(traj.flux)},
                {"converged", traj.converged},
                {"status", traj.status},
                {"t_end", traj.t_end},
                {"sigma_1", traj.sigma1},
                {"sigma_2", traj.sigma2},
                {"samples", traj.samples.size()},
                {"rescaled", traj.rescaled}};
}

}  // namespace liouville::io
