// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/algebra.hpp"
#include "liouville/ode.hpp"
#include "liouville/shooting.hpp"
#include "liouville/verify.hpp"

using namespace liouville;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (pass) detail << why;
        pass = false;
    }
};

// 1: decoupled fluxes
void decoupled(Outcome& o) {
    double worst = 0.0, slowest = 0.0;
    for (double N : {0.5, 1.0, 2.5}) {
        for (double alpha : {-5.0, 0.0, 5.0}) {
            const auto t0 = Clock::now();
            const auto tr = ode::integrate({0.0, N}, alpha);
            const double dt = seconds_since(t0);
            const double e = std::max(std::abs(tr.flux.beta1 - 4 * (N + 1)), std::abs(tr.flux.beta2 - 4));
            worst = std::max(worst, e);
            slowest = std::max(slowest, dt);
            if (!tr.converged) o.fail("not converged");
            if (e > 1e-6) o.fail("flux error");
            if (dt >= 1.0) o.fail("too slow");
        }
    }
    o.detail << " max error " << worst << ", slowest " << slowest << " s";
}

// 2: Toda fixed point
void toda(Outcome& o) {
    double worst = 0.0, slowest = 0.0;
    for (double N : {1.0, 2.0}) {
        for (double alpha : {-10.0, -5.0, 0.0, 5.0, 10.0}) {
            const auto t0 = Clock::now();
            const auto tr = ode::integrate({0.5, N}, alpha);
            const double dt = seconds_since(t0);
            const double e = std::max(std::abs(tr.flux.beta1 - 4 * (N + 2)), std::abs(tr.flux.beta2 - 4 * (N + 2)));
            worst = std::max(worst, e);
            slowest = std::max(slowest, dt);
            if (!tr.converged) o.fail("not converged");
            if (e > 1e-4) o.fail("flux error");
            if (dt >= 2.0) o.fail("too slow");
        }
    }
    o.detail << " max error " << worst << ", slowest " << slowest << " s";
}

// 3: conservation
void conservation(Outcome& o) {
    const ode::IntegratorConfig cfg;
    double psi0 = 0.0, psi_min = HUGE_VAL, residual = 0.0;
    for (double tau : {0.2, 0.5, 0.8}) {
        for (double N : {0.5, 1.0, 2.0}) {
            for (double alpha : {-5.0, 0.0, 5.0}) {
                const SystemParams p{tau, N};
                const auto tr = ode::integrate(p, alpha, cfg);
                const auto prof = verify::psi_profile(tr);
                const double scale = algebra::residual_scale(tr.flux.beta1, tr.flux.beta2);
                const double res = std::abs(algebra::ellipse_residual(tr.flux.beta1, tr.flux.beta2, p)) / scale;
                psi0 = std::max(psi0, prof.max_scaled_psi0);
                psi_min = std::min({psi_min, prof.min_psi1, prof.min_psi2});
                residual = std::max(residual, res);
                if (!tr.converged) o.fail("not converged");
                if (prof.max_scaled_psi0 > 100 * cfg.rel_tol) o.fail("psi0 drift");
                if (!(prof.min_psi1 > -1e-12) || !(prof.min_psi2 > -1e-12)) o.fail("negative psi1/psi2");
                if (res > 1e-6) o.fail("final residual");
            }
        }
    }
    o.detail << " max |psi0|/scale " << psi0 << ", min psi1/psi2 " << psi_min
             << ", max residual/scale " << residual;
}

const double kSweepTaus[] = {0.15, 0.3, 0.45, 0.55, 0.6, 0.7, 0.9};

// 4: interval containment
void containment(Outcome& o, const std::map<double, shooting::SweepResult>& sweeps) {
    int points = 0, converged = 0;
    double worst_branch = 0.0;
    for (const auto& [tau, res] : sweeps) {
        const SystemParams p{tau, 1.0};
        const auto b = algebra::beta_pm(p);
        for (const auto& pt : res.points) {
            ++points;
            if (!pt.converged || pt.failed) continue;
            ++converged;
            const double b1 = pt.flux.beta1, b2 = pt.flux.beta2;
            if (!(b.minus1 < b1 && b1 < b.plus1)) o.fail("beta1 outside the interval at tau " + std::to_string(tau));
            const double dev = std::abs(b2 - algebra::phi1(b1, algebra::Sign::plus, p)) / b2;
            worst_branch = std::max(worst_branch, dev);
            if (dev > 1e-5) o.fail("off the branch at tau " + std::to_string(tau));
        }
    }
    if (converged != points) o.fail("non-converged sweep points");
    o.detail << " " << converged << "/" << points << " converged, max branch deviation " << worst_branch;
}

// 5: limits
void limits(Outcome& o) {
    double worst = 0.0;
    for (double tau : {0.15, 0.3, 0.6, 0.9}) {
        const auto rep = shooting::estimate_limits({tau, 1.0}, 30.0);
        for (const auto* d : {&rep.plus, &rep.minus}) {
            const double dist = std::max(d->rel_distance1, d->rel_distance2);
            worst = std::max(worst, dist);
            if (dist > 0.05) o.fail("limit distance at tau " + std::to_string(tau));
            if (!d->monotone || !d->approaching) o.fail("trend flags at tau " + std::to_string(tau));
            if (!d->converged) o.fail("ladder not converged at tau " + std::to_string(tau));
        }
    }
    o.detail << " max relative distance " << worst;
}

// 6: flux bounds
void flux_bounds(Outcome& o, const std::map<double, shooting::SweepResult>& sweeps) {
    int checked = 0, violations = 0;
    for (const auto& [tau, res] : sweeps) {
        const SystemParams p{tau, 1.0};
        const double tol = tau < 0.5 ? 1e-6 : 0.0;
        for (const auto& pt : res.points) {
            if (!pt.converged || pt.failed) continue;
            const auto rep = algebra::flux_bounds_check(pt.flux.beta1, pt.flux.beta2, p, tol);
            if (rep.below_half || rep.above_half_index2 || rep.above_half_index1) ++checked;
            violations += rep.violations;
        }
    }
    if (violations != 0) o.fail("violations");
    o.detail << " " << checked << " points checked, " << violations << " violations";
}

// 7: threshold algebra
void thresholds(Outcome& o) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    double worst0 = 0.0, worst1 = 0.0;
    for (int i = 0; i < 50; ++i) {
        double N = 10.0 - dist(rng);  // (0, 10]
        const auto t0 = algebra::tau0(N);
        const auto t1 = algebra::tau1(N);
        const double e0 = std::abs(algebra::beta_star_star({t0.first, N}).first - 4 * (N + 1));
        const SystemParams q{t1.first, N};
        const double e1 = std::abs(algebra::beta_star(q).second - q.tau * algebra::beta_star_star(q).first - 2);
        worst0 = std::max(worst0, e0);
        worst1 = std::max(worst1, e1);
        if (e0 > 1e-10) o.fail("tau0 characterization");
        if (e1 > 1e-9) o.fail("tau1 characterization");
        if (!(t0.second < t0.first && t0.first < 0.5 && 0.5 < t1.second && t1.second < t1.first &&
              t1.first < 1 / std::sqrt(2.0)))
            o.fail("ordering chain");
    }
    o.detail << " tau0 error " << worst0 << ", tau1 error " << worst1;
}

// 8: relaunch invariance
void scale_invariance(Outcome& o) {
    double worst = 0.0;
    for (double tau : {0.2, 0.5, 0.8}) {
        for (double N : {0.5, 1.0, 2.0}) {
            const SystemParams p{tau, N};
            const double alpha = 1.5;
            const auto base = ode::integrate(p, alpha);
            for (double lambda : {0.5, 2.0}) {
                const double l = std::log(lambda);
                const auto tr = ode::integrate(p, ode::LaunchData{alpha + 2 * (N + 1) * l, 2 * l});
                const double e = std::max(std::abs(tr.flux.beta1 - base.flux.beta1) / base.flux.beta1,
                                          std::abs(tr.flux.beta2 - base.flux.beta2) / base.flux.beta2);
                worst = std::max(worst, e);
                if (e > 1e-8) o.fail("flux changed under relaunch");
            }
        }
    }
    o.detail << " max relative change " << worst;
}

// 9: general Pohozaev identity
void general_pohozaev(Outcome& o) {
    double worst_toda = 0.0;
    for (double n1 : {0.0, 1.0, 2.5}) {
        for (double n2 : {0.0, 0.5, 3.0}) {
            const verify::GeneralSystem k{2.0, -1.0, -1.0, 2.0, n1, n2};
            const double b = 2 * (n1 + n2 + 2);
            const double e = std::abs(verify::general_pohozaev_residual(k, b, b)) / algebra::residual_scale(b, b);
            worst_toda = std::max(worst_toda, e);
            if (e > 1e-9) o.fail("Toda residual");
        }
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_ratio = 0.0;
    int tested = 0;
    while (tested < 100) {
        const double sign = u(rng) < 0.5 ? -1.0 : 1.0;
        const verify::GeneralSystem g{0.2 + 4 * u(rng), sign * (0.1 + 3 * u(rng)), sign * (0.1 + 3 * u(rng)),
                                      0.2 + 4 * u(rng), -0.9 + 6 * u(rng),      -0.9 + 6 * u(rng)};
        const double b1 = 0.5 + 30 * u(rng), b2 = 0.5 + 30 * u(rng);
        const double general = verify::general_pohozaev_residual(g, b1, b2);
        if (std::abs(general) < 1e-6) continue;
        const auto s = verify::symmetrize(g);
        const double sym = verify::symmetric_pohozaev_residual(s.system, s.flux_scale1 * b1, s.flux_scale2 * b2);
        const double ratio = sym / general;
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
        if (std::abs(ratio - 1.0) > 1e-9) o.fail("symmetrized residual not proportional");
        ++tested;
    }
    o.detail << " Toda residual/scale " << worst_toda << ", max |factor - 1| " << worst_ratio;
}

}  // namespace

int main() {
    const auto start = Clock::now();
    std::map<double, shooting::SweepResult> sweeps;
    const auto grid = shooting::linear_grid(-20.0, 20.0, 41);
    for (double tau : kSweepTaus) sweeps.emplace(tau, shooting::sweep({tau, 1.0}, grid));

    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"decoupled fluxes", decoupled},
        {"Toda fixed point", toda},
        {"conservation", conservation},
        {"interval containment", [&](Outcome& o) { containment(o, sweeps); }},
        {"shooting limits", limits},
        {"flux bounds", [&](Outcome& o) { flux_bounds(o, sweeps); }},
        {"threshold algebra", thresholds},
        {"scale invariance", scale_invariance},
        {"general Pohozaev identity", general_pohozaev},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            check(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::printf("%s %d %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", index++, name.c_str(),
                    o.detail.str().c_str(), seconds_since(t0));
    }
    std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures,
                criteria.size(), seconds_since(start));
    return failures == 0 ? 0 : 1;
}
