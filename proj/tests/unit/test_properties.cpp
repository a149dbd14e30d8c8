#include <doctest.h>

#include <cmath>
#include <random>

#include "liouville/algebra.hpp"
#include "liouville/ode.hpp"
#include "liouville/verify.hpp"

using namespace liouville;
using namespace liouville::algebra;

namespace {

struct Sampler {
    std::mt19937_64 rng{20261016};
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    SystemParams params() { return {uniform(0.01, 0.99), uniform(0.05, 10.0)}; }
};

}  // namespace

// At x = beta_under_1 the arc has a horizontal tangent and phi2 has a zero
// radicand there, so one ulp in b2 moves x by about sqrt(ulp); the endpoint
// is checked at that conditioning limit.
TEST_CASE("branch functions invert each other") {
    Sampler s;
    for (int k = 0; k < 200; ++k) {
        const auto p = s.params();
        const auto e = beta_extremes(p);
        for (int i = 0; i <= 20; ++i) {
            const double x = e.under1 + (e.over1 - e.under1) * i / 20.0;
            const double back = phi2(phi1(x, Sign::plus, p), Sign::plus, p);
            const double tol = i == 0 ? 1e-6 : 1e-12;
            CHECK(std::abs(back - x) <= tol * (1 + std::abs(x)));
        }
    }
}

TEST_CASE("branch monotonicity") {
    Sampler s;
    for (int k = 0; k < 200; ++k) {
        const auto p = s.params();
        const auto e = beta_extremes(p);
        const double n4 = 4 * (p.bigN + 1);
        double prev_plus = HUGE_VAL;
        double prev_minus = -HUGE_VAL;
        for (int i = 1; i < 40; ++i) {
            const double x = e.under1 + (e.over1 - e.under1) * i / 40.0;
            const double yp = phi1(x, Sign::plus, p);
            CHECK(yp < prev_plus);
            prev_plus = yp;
            if (x >= n4) {
                const double ym = phi1(x, Sign::minus, p);
                CHECK(ym > prev_minus);
                prev_minus = ym;
            }
        }
    }
}

TEST_CASE("named points lie on the ellipse") {
    Sampler s;
    for (int k = 0; k < 200; ++k) {
        const auto p = s.params();
        const auto st = beta_star(p);
        const auto ss = beta_star_star(p);
        const auto e = beta_extremes(p);
        const double n4 = 4 * (p.bigN + 1);
        const std::pair<double, double> pts[] = {{n4, st.second},      {st.first, 4.0},
                                                 {ss.first, st.second}, {st.first, ss.second},
                                                 {e.under1, e.over2},   {e.over1, e.under2}};
        for (const auto& [b1, b2] : pts) {
            CHECK(std::abs(ellipse_residual(b1, b2, p)) <= 1e-9 * residual_scale(b1, b2));
        }
    }
}

TEST_CASE("threshold characterizations and ordering") {
    Sampler s;
    for (int k = 0; k < 200; ++k) {
        const double N = s.uniform(1e-3, 10.0);
        const auto t0 = tau0(N);
        const auto t1 = tau1(N);
        CHECK(std::abs(beta_star_star({t0.first, N}).first - 4 * (N + 1)) <= 1e-10);
        CHECK(std::abs(beta_star_star({t0.second, N}).second - 4) <= 1e-10);
        {
            const SystemParams p{t1.first, N};
            CHECK(std::abs(beta_star(p).second - p.tau * beta_star_star(p).first - 2) <= 1e-9);
        }
        {
            const SystemParams p{t1.second, N};
            CHECK(std::abs(beta_star(p).first - p.tau * beta_star_star(p).second - 2 * (N + 1)) <=
                  1e-9);
        }
        CHECK(t0.second < t0.first);
        CHECK(t0.first < 0.5);
        CHECK(0.5 < t1.second);
        CHECK(t1.second < t1.first);
        CHECK(t1.first < 1 / std::sqrt(2.0));
    }
}

TEST_CASE("solvability bounds are continuous at the breakpoints") {
    Sampler s;
    const double eps = 1e-13;
    for (int k = 0; k < 100; ++k) {
        const double N = s.uniform(0.05, 10.0);
        const auto t0 = tau0(N);
        const auto t1 = tau1(N);
        for (double tb : {t0.first, t0.second, 0.5, t1.first, t1.second}) {
            const auto lo = beta_pm({tb - eps, N});
            const auto hi = beta_pm({tb + eps, N});
            CHECK(std::abs(lo.minus1 - hi.minus1) <= 1e-9);
            CHECK(std::abs(lo.plus1 - hi.plus1) <= 1e-9);
            CHECK(std::abs(lo.minus2 - hi.minus2) <= 1e-9);
            CHECK(std::abs(lo.plus2 - hi.plus2) <= 1e-9);
            const auto llo = beta_limits({tb - eps, N});
            const auto lhi = beta_limits({tb + eps, N});
            CHECK(std::abs(llo.plus1 - lhi.plus1) <= 1e-9);
            CHECK(std::abs(llo.plus2 - lhi.plus2) <= 1e-9);
            CHECK(std::abs(llo.minus1 - lhi.minus1) <= 1e-9);
            CHECK(std::abs(llo.minus2 - lhi.minus2) <= 1e-9);
        }
    }
}

TEST_CASE("interval collapses at the Toda coupling") {
    for (double N : {0.5, 1.0, 4.0}) {
        for (double tau : {0.5 - 1e-6, 0.5 + 1e-6}) {
            const auto b = beta_pm({tau, N});
            CHECK(std::abs(b.plus1 - b.minus1) <= 1e-3);
            CHECK(std::abs(b.plus2 - b.minus2) <= 1e-3);
        }
    }
}

TEST_CASE("solvability bounds lie on the arc") {
    Sampler s;
    for (int k = 0; k < 200; ++k) {
        const auto p = s.params();
        const auto b = beta_pm(p);
        const auto e = beta_extremes(p);
        CHECK(b.minus1 <= b.plus1);
        CHECK(b.minus1 >= e.under1 - 1e-9);
        CHECK(b.plus1 <= e.over1 + 1e-9);
        CHECK(b.minus1 >= 4 * (p.bigN + 1) - 1e-9);
        CHECK(b.minus2 >= 4.0 - 1e-9);
    }
}

TEST_CASE("symmetrization is proportional on random admissible matrices") {
    Sampler s;
    for (int k = 0; k < 200; ++k) {
        const double sign = s.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
        const verify::GeneralSystem g{s.uniform(0.2, 4.0),  sign * s.uniform(0.1, 3.0),
                                      sign * s.uniform(0.1, 3.0), s.uniform(0.2, 4.0),
                                      s.uniform(-0.9, 5.0), s.uniform(-0.9, 5.0)};
        const auto sym = verify::symmetrize(g);
        const double b1 = s.uniform(0.1, 30.0), b2 = s.uniform(0.1, 30.0);
        const double general = verify::general_pohozaev_residual(g, b1, b2);
        const double symmetric =
            verify::symmetric_pohozaev_residual(sym.system, sym.flux_scale1 * b1, sym.flux_scale2 * b2);
        CHECK(std::abs(symmetric - general) <= 1e-12 * (1 + b1 * b1 + b2 * b2) * 100);
    }
}

TEST_CASE("flux pair is invariant under relaunch scaling") {
    Sampler s;
    for (int k = 0; k < 6; ++k) {
        const SystemParams p{s.uniform(0.05, 0.9), s.uniform(0.3, 3.0)};
        const double alpha = s.uniform(-8.0, 8.0);
        const auto base = ode::integrate(p, alpha);
        for (double lambda : {0.5, 2.0}) {
            const double l = std::log(lambda);
            const auto moved = ode::integrate(p, ode::LaunchData{alpha + 2 * (p.bigN + 1) * l, 2 * l});
            CHECK(std::abs(moved.flux.beta1 - base.flux.beta1) <= 1e-8 * base.flux.beta1);
            CHECK(std::abs(moved.flux.beta2 - base.flux.beta2) <= 1e-8 * base.flux.beta2);
        }
    }
}
