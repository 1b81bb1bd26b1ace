#include "alm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "alm/errors.hpp"

namespace alm {

double RhoSchedule::at(int k) const {
    if (kind == Kind::constant)
        return rho0;
    return std::min(cap, rho0 * std::pow(factor, k));
}

void SolverConfig::validate() const {
    if (!(rho.rho0 > 0) || !std::isfinite(rho.rho0))
        throw InputError("config: rho must be positive and finite");
    if (rho.kind == RhoSchedule::Kind::geometric && !(rho.factor >= 1))
        throw InputError("config: geometric factor must be >= 1");
    if (rho.kind == RhoSchedule::Kind::geometric && !(rho.cap >= rho.rho0))
        throw InputError("config: rho cap must be >= rho0");
    if (!(tol.p > 1))
        throw InputError("config: tolerance exponent must exceed 1");
    if (!(tol.sigma > 0) || !(tol.c_lin > 0))
        throw InputError("config: tolerance scales must be positive");
    if (!(c_hat > 0))
        throw InputError("config: c_hat must be positive");
    if (!(stop_residual > 0))
        throw InputError("config: stop_residual must be positive");
    if (max_outer < 0 || max_inner < 0)
        throw InputError("config: iteration caps must be nonnegative");
    if (!(inner_tol >= 0))
        throw InputError("config: inner_tol must be nonnegative");
}

double tolerance_fn(const SolverConfig &cfg, double t) {
    if (!(t >= 0))
        throw InputError("tolerance_fn: t must be nonnegative");
    return std::min(cfg.tol.c_lin * t, cfg.tol.sigma * std::pow(t, cfg.tol.p));
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kStepMin = 1e-14;
constexpr double kStepMax = 1e12;
constexpr size_t kStatMemory = 10;

bool unconstrained(const Polyhedron &P) { return P.n_ineq() == 0 && P.n_eq() == 0; }

// Rounding level of an augmented Lagrangian value: the terms being summed are
// of size |phi| + |envelope| + |y|^2/(2 rho), any of which may dominate.
double value_noise(const AugPoint &a, const Vec &y, double rho) {
    return 64 * 2.2e-16 * (1.0 + std::abs(a.value) + y.squaredNorm() / rho);
}

} // namespace

SubproblemResult solve_subproblem(const AugEvalContext &ctx, const Polyhedron &theta, const Vec &y,
                                  const Vec &x_start, double eps, int max_inner, std::vector<double> *trace) {
    require_dim(x_start, ctx.problem->n, "x_start");
    if (!(eps >= 0))
        throw InputError("solve_subproblem: eps must be nonnegative");
    if (!theta.contains(x_start, kDefaultActivity))
        throw InputError("solve_subproblem: x_start is not in theta");
    const double target = eps > 0 ? eps : kStationarityCap;
    const double accept = std::max(eps, kStationarityCap);
    const bool free = unconstrained(theta);
    auto stationarity = [&](const Vec &x, const Vec &g) {
        return free ? g.norm() : normal_cone_distance(theta, x, -g, kDefaultActivity);
    };

    Vec x = x_start;
    AugPoint cur = aug_evaluate(ctx, x, y);
    double stat = stationarity(x, cur.grad_x);
    if (trace)
        trace->push_back(cur.value);
    double alpha = 1.0 / std::max(1.0, ctx.rho);
    Vec best_x = x;
    double best_stat = stat;
    std::deque<double> recent{stat}; // stationarity of the last few iterates
    int it = 0;
    for (; it < max_inner; ++it) {
        if (stat <= target)
            return {x, it, stat};
        bool accepted = false;
        Vec xn;
        AugPoint nxt;
        double stat_n = 0;
        alpha = std::clamp(alpha, kStepMin, kStepMax);
        for (int bt = 0; bt < 80; ++bt, alpha *= 0.5) {
            const Vec trial = x - alpha * cur.grad_x;
            xn = free ? trial : project(theta, trial);
            const Vec d = xn - x;
            if (d.squaredNorm() == 0)
                break;
            nxt = aug_evaluate(ctx, xn, y);
            const double gd = cur.grad_x.dot(d);
            if (nxt.value <= cur.value + kArmijo * gd) {
                stat_n = stationarity(xn, nxt.grad_x);
                accepted = true;
                break;
            }
            // Below the rounding level of the objective the Armijo test is
            // noise; accept a step that does not raise the value beyond that
            // level and improves on the worst recent stationarity.
            const double noise = value_noise(cur, y, ctx.rho);
            if (std::abs(gd) <= noise && nxt.value <= cur.value + noise) {
                stat_n = stationarity(xn, nxt.grad_x);
                if (stat_n < *std::max_element(recent.begin(), recent.end())) {
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted)
            break;
        const Vec s = xn - x;
        const Vec dg = nxt.grad_x - cur.grad_x;
        const double sy = s.dot(dg);
        alpha = sy > 0 ? s.squaredNorm() / sy : kStepMax;
        x = std::move(xn);
        cur = std::move(nxt);
        stat = stat_n;
        recent.push_back(stat);
        if (recent.size() > kStatMemory)
            recent.pop_front();
        if (stat < best_stat) {
            best_stat = stat;
            best_x = x;
        }
        if (trace)
            trace->push_back(cur.value);
    }
    if (best_stat <= accept)
        return {best_x, it, best_stat};
    throw SubproblemFailed("solve_subproblem: stationarity " + std::to_string(stat) + " above " +
                               std::to_string(accept) + " after " + std::to_string(it) + " iterations",
                           best_x, it);
}

std::string to_string(RunStatus s) {
    switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_outer: return "max_outer";
    case RunStatus::locality_failed: return "locality_failed";
    case RunStatus::subproblem_failed: return "subproblem_failed";
    }
    return "unknown";
}

namespace {

void fill_distances(IterationRecord &r, const KnownSolution *known) {
    if (!known)
        return;
    r.dist_primal = (r.x - known->x_bar).norm();
    r.dist_dual = dist_to_polyhedron(known->multiplier_set, r.y);
}

} // namespace

RunTrace alm_run(const CompositeProblem &p, const Vec &x0, const Vec &y0, const SolverConfig &cfg,
                 const KnownSolution *known) {
    p.validate();
    cfg.validate();
    require_dim(x0, p.n, "x0");
    require_dim(y0, p.m, "y0");
    if (!p.theta.contains(x0, kDefaultActivity))
        throw InputError("alm_run: x0 is not in theta");

    RunTrace tr;
    IterationRecord first;
    first.k = 0;
    first.x = x0;
    first.y = y0;
    first.rho = cfg.rho.at(0);
    first.residual = kkt_residual(p, x0, y0);
    fill_distances(first, known);
    tr.records.push_back(std::move(first));

    // Geometric schedules keep a doubling forced by a locality retry.
    double boost = 1.0;
    for (int k = 0;; ++k) {
        const IterationRecord &last = tr.records.back();
        const double r = last.residual;
        if (r <= cfg.stop_residual) {
            tr.status = RunStatus::converged;
            return tr;
        }
        if (k >= cfg.max_outer) {
            tr.status = RunStatus::max_outer;
            return tr;
        }
        const double eps = std::max(tolerance_fn(cfg, r), kEpsFloor);
        const double rho = cfg.rho.kind == RhoSchedule::Kind::geometric
                               ? std::min(cfg.rho.cap, cfg.rho.at(k) * boost)
                               : cfg.rho.at(k);
        const std::pair<double, double> attempts[] = {{eps, rho}, {eps / 2, rho}, {eps / 4, rho}, {eps / 4, 2 * rho}};
        const double bound = cfg.c_hat * r;

        IterationRecord best;
        best.step_norm = kInf;
        int tries = 0;
        for (const auto &[e, rh] : attempts) {
            const double e_used = cfg.inner_tol > 0 ? std::min(e, cfg.inner_tol) : e;
            const AugEvalContext ctx(p, rh);
            SubproblemResult sub;
            try {
                sub = solve_subproblem(ctx, p.theta, last.y, last.x, e_used, cfg.max_inner);
            } catch (const SubproblemFailed &) {
                tr.status = RunStatus::subproblem_failed;
                return tr;
            }
            Vec yn = dual_update(ctx, sub.x, last.y);
            const double step = (sub.x - last.x).norm() + (yn - last.y).norm();
            if (step < best.step_norm) {
                best.x = std::move(sub.x);
                best.y = std::move(yn);
                best.rho = rh;
                best.eps_used = e_used;
                best.step_norm = step;
                best.inner_iters = sub.inner_iters;
            }
            if (step <= bound || tries == 3)
                break;
            ++tries;
        }
        best.k = k + 1;
        best.locality_retries = tries;
        best.eps = eps;
        best.locality_violated = best.step_norm > bound;
        if (cfg.rho.kind == RhoSchedule::Kind::geometric && best.rho > rho)
            boost *= 2;
        best.residual = kkt_residual(p, best.x, best.y);
        fill_distances(best, known);
        const bool fail = best.step_norm > 10 * bound;
        tr.records.push_back(std::move(best));
        if (fail) {
            tr.status = RunStatus::locality_failed;
            return tr;
        }
    }
}

} // namespace alm
