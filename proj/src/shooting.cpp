#include "liouville/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace liouville::shooting {

namespace {

bool is_half(double tau) { return std::abs(tau - 0.5) <= 1e-12; }

SweepPoint evaluate(const SystemParams& params, double alpha, const ode::IntegratorConfig& config) {
    SweepPoint pt;
    pt.alpha = alpha;
    try {
        const ode::Trajectory tr = ode::integrate(params, alpha, config);
        pt.flux = tr.flux;
        pt.converged = tr.converged;
        if (!tr.converged) pt.error = tr.status;
    } catch (const std::exception& e) {
        pt.failed = true;
        pt.error = e.what();
        return pt;
    }
    const double b1 = pt.flux.beta1;
    const double b2 = pt.flux.beta2;
    pt.residual = algebra::ellipse_residual(b1, b2, params) / algebra::residual_scale(b1, b2);
    pt.conditions = algebra::necessary_conditions(b1, b2, params);
    return pt;
}

// Least-squares fit beta = L + c x with x = 1/alpha; returns L.
LimitEstimate fit_limit(const std::vector<const SweepPoint*>& pts) {
    LimitEstimate out;
    out.points_used = static_cast<int>(pts.size());
    if (pts.empty()) return out;
    out.available = true;
    if (pts.size() == 1) {
        out.flux = pts.front()->flux;
        return out;
    }
    const double n = static_cast<double>(pts.size());
    double sx = 0, sxx = 0, s1 = 0, s2 = 0, sx1 = 0, sx2 = 0;
    for (const auto* p : pts) {
        const double x = 1.0 / p->alpha;
        sx += x;
        sxx += x * x;
        s1 += p->flux.beta1;
        s2 += p->flux.beta2;
        sx1 += x * p->flux.beta1;
        sx2 += x * p->flux.beta2;
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) <= 1e-300) {
        out.flux = {s1 / n, s2 / n, 0.0, 0.0};
        return out;
    }
    const double c1 = (n * sx1 - sx * s1) / den;
    const double c2 = (n * sx2 - sx * s2) / den;
    out.flux.beta1 = (s1 - c1 * sx) / n;
    out.flux.beta2 = (s2 - c2 * sx) / n;
    double r1 = 0, r2 = 0;
    for (const auto* p : pts) {
        const double x = 1.0 / p->alpha;
        r1 = std::max(r1, std::abs(p->flux.beta1 - out.flux.beta1 - c1 * x));
        r2 = std::max(r2, std::abs(p->flux.beta2 - out.flux.beta2 - c2 * x));
    }
    out.flux.err1 = r1;
    out.flux.err2 = r2;
    return out;
}

bool monotone(double a, double b, double c, double slack) {
    const bool up = b >= a - slack && c >= b - slack;
    const bool down = b <= a + slack && c <= b + slack;
    return up || down;
}

LadderDiagnostics ladder(const std::vector<const SweepPoint*>& pts, double target1, double target2) {
    LadderDiagnostics d;
    d.target1 = target1;
    d.target2 = target2;
    d.converged = true;
    for (const auto* p : pts) {
        d.alphas.push_back(p->alpha);
        d.values.push_back(p->flux);
        if (!p->converged || p->failed) d.converged = false;
        if (p->failed && d.note.empty()) d.note = "ladder point failed: " + p->error;
    }
    const FluxPair& q = d.values[0];
    const FluxPair& h = d.values[1];
    const FluxPair& a = d.values[2];
    d.extrapolated.beta1 = 2.0 * a.beta1 - h.beta1;
    d.extrapolated.beta2 = 2.0 * a.beta2 - h.beta2;
    d.extrapolated.err1 = std::abs(a.beta1 - h.beta1) + a.err1;
    d.extrapolated.err2 = std::abs(a.beta2 - h.beta2) + a.err2;
    d.rel_distance1 = std::abs(d.extrapolated.beta1 - target1) / std::abs(target1);
    d.rel_distance2 = std::abs(d.extrapolated.beta2 - target2) / std::abs(target2);

    const double slack1 = 1e-9 * (1.0 + std::abs(target1));
    const double slack2 = 1e-9 * (1.0 + std::abs(target2));
    d.monotone = monotone(q.beta1, h.beta1, a.beta1, slack1) &&
                 monotone(q.beta2, h.beta2, a.beta2, slack2);
    auto closer = [](double x, double y, double z, double target, double slack) {
        const double dx = std::abs(x - target), dy = std::abs(y - target), dz = std::abs(z - target);
        return dy <= dx + slack && dz <= dy + slack;
    };
    d.approaching = closer(q.beta1, h.beta1, a.beta1, target1, slack1) &&
                    closer(q.beta2, h.beta2, a.beta2, target2, slack2);
    d.reliable = d.converged;
    if (!d.converged && d.note.empty()) d.note = "ladder contains non-converged points";
    return d;
}

}  // namespace

FluxPair flux_of_alpha(const SystemParams& params, double alpha, const ode::IntegratorConfig& config) {
    return ode::integrate(params, alpha, config).flux;
}

bool SweepResult::all_converged() const {
    return std::all_of(points.begin(), points.end(),
                       [](const SweepPoint& p) { return p.converged && !p.failed; });
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 1) throw PreconditionError("grid needs at least one point");
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        throw PreconditionError("grid bounds must be finite with lo <= hi");
    std::vector<double> grid(static_cast<std::size_t>(n));
    if (n == 1) {
        grid[0] = lo;
        return grid;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + step * i;
    grid.back() = hi;
    return grid;
}

SweepResult sweep(const SystemParams& params, const std::vector<double>& grid,
                  const ode::IntegratorConfig& config, unsigned threads) {
    validate(params);
    if (grid.empty()) throw PreconditionError("alpha grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) throw PreconditionError("alpha grid must be ordered");

    SweepResult out;
    out.params = params;
    out.points.resize(grid.size());
    const std::size_t n = grid.size();
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out.points[i] = evaluate(params, grid[i], config);
    };
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned k = 0; k < workers; ++k) {
            const std::size_t begin = n * k / workers;
            const std::size_t end = n * (k + 1) / workers;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    const std::size_t third = std::max<std::size_t>(1, n / 3);
    std::vector<const SweepPoint*> plus, minus;
    for (std::size_t i = n - third; i < n; ++i) {
        const auto& p = out.points[i];
        if (p.alpha > 0.0 && p.converged && !p.failed) plus.push_back(&p);
    }
    for (std::size_t i = 0; i < third; ++i) {
        const auto& p = out.points[i];
        if (p.alpha < 0.0 && p.converged && !p.failed) minus.push_back(&p);
    }
    out.limit_plus = fit_limit(plus);
    out.limit_minus = fit_limit(minus);
    return out;
}

LimitsReport estimate_limits(const SystemParams& params, double alpha_max,
                             const ode::IntegratorConfig& config, unsigned threads) {
    validate_competitive(params);
    if (!(alpha_max >= 10.0) || !std::isfinite(alpha_max))
        throw PreconditionError("alpha_max must be at least 10");
    const double a = alpha_max;
    const std::vector<double> grid{-a, -a / 2, -a / 4, a / 4, a / 2, a};
    const SweepResult sw = sweep(params, grid, config, threads);
    const auto limits = algebra::beta_limits(params);

    LimitsReport out;
    out.alpha_max = a;
    out.plus = ladder({&sw.points[3], &sw.points[4], &sw.points[5]}, limits.plus1, limits.plus2);
    out.minus = ladder({&sw.points[2], &sw.points[1], &sw.points[0]}, limits.minus1, limits.minus2);
    return out;
}

TargetSolution solve_for_target(const SystemParams& params, double target_beta1, double alpha_lo,
                                double alpha_hi, const ode::IntegratorConfig& config, double tol) {
    validate_competitive(params);
    if (!(alpha_lo < alpha_hi) || !std::isfinite(alpha_lo) || !std::isfinite(alpha_hi))
        throw PreconditionError("bracket must satisfy alpha_lo < alpha_hi");
    if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");

    TargetSolution sol;
    auto eval = [&](double alpha) {
        ++sol.evaluations;
        const ode::Trajectory tr = ode::integrate(params, alpha, config);
        if (!tr.converged) {
            std::ostringstream msg;
            msg << "integration at alpha = " << alpha << " did not converge: " << tr.status;
            throw std::runtime_error(msg.str());
        }
        return tr.flux;
    };

    if (is_half(params.tau)) {
        const double toda = 4.0 * (params.bigN + 2.0);
        if (std::abs(target_beta1 - toda) > tol) {
            std::ostringstream msg;
            msg << "at tau = 1/2 the only radial flux is " << toda << "; target " << target_beta1;
            throw PreconditionError(msg.str());
        }
        sol.alpha = alpha_lo;
        sol.flux = eval(alpha_lo);
        return sol;
    }

    const auto bounds = algebra::beta_pm(params);
    if (!(target_beta1 > bounds.minus1 && target_beta1 < bounds.plus1)) {
        std::ostringstream msg;
        msg << "target beta1 = " << target_beta1 << " outside the radial range (" << bounds.minus1
            << ", " << bounds.plus1 << ")";
        throw PreconditionError(msg.str());
    }

    double lo = alpha_lo, hi = alpha_hi;
    FluxPair flo = eval(lo);
    FluxPair fhi = eval(hi);
    double glo = flo.beta1 - target_beta1;
    const double ghi = fhi.beta1 - target_beta1;
    if (std::abs(glo) <= tol) return {lo, flo, sol.evaluations};
    if (std::abs(ghi) <= tol) return {hi, fhi, sol.evaluations};
    if ((glo > 0.0) == (ghi > 0.0)) {
        std::ostringstream msg;
        msg << "beta1 does not straddle " << target_beta1 << " on [" << alpha_lo << ", " << alpha_hi
            << "]: observed beta1 = " << flo.beta1 << " and " << fhi.beta1;
        throw BracketError(msg.str(), flo.beta1, fhi.beta1);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const FluxPair fm = eval(mid);
        const double gm = fm.beta1 - target_beta1;
        if (std::abs(gm) <= tol) return {mid, fm, sol.evaluations};
        if (hi - lo <= 1e-14 * (1.0 + std::abs(mid))) break;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    std::ostringstream msg;
    msg << "bisection stalled before reaching |beta1 - target| <= " << tol;
    throw std::runtime_error(msg.str());
}

}  // namespace liouville::shooting
