#include "alm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "alm/cone_sampling.hpp"
#include "alm/errors.hpp"
#include "alm/solver.hpp"

namespace alm {

void QuotientGrid::validate() const {
    if (!(t0 > 0))
        throw InputError("grid: t0 must be positive");
    if (!(theta > 0 && theta < 1))
        throw InputError("grid: theta must lie in (0, 1)");
    if (levels < 3)
        throw InputError("grid: at least 3 levels are required");
    if (!(dir_radius >= 0))
        throw InputError("grid: direction radius must be nonnegative");
    if (samples_per_level < 1)
        throw InputError("grid: samples_per_level must be positive");
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::none: return "none";
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::vacuous: return "vacuous";
    }
    return "unknown";
}

double second_order_quotient(const ConvexFunction &f, const Vec &x, const Vec &v, double t, const Vec &w) {
    if (!(t > 0))
        throw InputError("second_order_quotient: t must be positive");
    require_dim(v, f.dim(), "second_order_quotient");
    const double inc = g_increment(f, x, t * w);
    if (!std::isfinite(inc))
        return kInf;
    return (inc - t * v.dot(w)) / (0.5 * t * t);
}

namespace {

bool curved(const ConvexFunction &f) {
    return std::holds_alternative<SecondOrderCone>(f.variant()) || std::holds_alternative<PsdCone>(f.variant());
}

// A direction into the interior of a curved cone.
Vec interior_direction(const ConvexFunction &f) {
    if (const auto *p = std::get_if<PsdCone>(&f.variant()))
        return svec(Mat::Identity(p->order, p->order));
    return Vec::Unit(f.dim(), 0);
}

std::mt19937_64 level_rng(std::uint64_t seed, int level, std::uint32_t tag) {
    std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(level), tag};
    return std::mt19937_64(s);
}

std::vector<double> level_steps(const QuotientGrid &g, const ConvexFunction &f, const Vec &x,
                                std::vector<std::string> &notes) {
    g.validate();
    const double floor = curved(f) ? std::cbrt(2.220446049250313e-16) * (1.0 + x.norm()) : 0.0;
    std::vector<double> ts;
    double t = g.t0;
    for (int l = 0; l < g.levels; ++l, t *= g.theta) {
        if (t < floor) {
            std::ostringstream os;
            os << "levels below the resolution floor t = " << floor << " skipped (" << g.levels - l << ")";
            notes.push_back(os.str());
            break;
        }
        ts.push_back(t);
    }
    if (ts.empty())
        throw InputError("grid: t0 is below the resolution floor");
    return ts;
}

std::vector<Vec> level_directions(const QuotientGrid &g, int level, double t, const Vec &w) {
    std::mt19937_64 rng = level_rng(g.seed, level, 1);
    std::vector<Vec> out{w};
    for (int s = 1; s < g.samples_per_level; ++s)
        out.push_back(uniform_ball(rng, w, g.dir_radius * t));
    return out;
}

// Minimum of the quotient of an indicator over B(w, delta), by ADMM on
// (indicator of x + t w' in C) + (linear term + ball). Returns +inf when no
// feasible candidate is certified.
double ball_refine(const ConvexFunction &f, const Vec &x, const Vec &v, double t, const Vec &w, double delta,
                   const Vec *feasible) {
    if (!(delta > 0))
        return kInf;
    const double nv = v.norm();
    const double lambda = nv > 0 ? 0.05 * delta * t / (2 * nv) : 1.0;
    const Vec shift = (2 * lambda / t) * v;
    auto ball = [&](const Vec &q) {
        const Vec d = q - w;
        const double nd = d.norm();
        return nd <= delta ? q : Vec(w + d * (delta / nd));
    };
    Vec w2 = w, u = Vec::Zero(w.size()), w1 = w;
    for (int it = 0; it < 4000; ++it) {
        w1 = (prox(f, 1.0, x + t * (w2 - u)) - x) / t;
        const Vec w2n = ball(w1 + u + shift);
        const double change = (w2n - w2).norm();
        w2 = w2n;
        u += w1 - w2;
        if (it > 10 && (w1 - w2).norm() <= 1e-10 * delta && change <= 1e-10 * delta)
            break;
    }
    // Projection output lies on the boundary up to rounding; push it along
    // the cone's interior direction until membership is certified.
    const Vec e = interior_direction(f);
    double best = kInf;
    for (const Vec &cand : {ball(w1), w2}) {
        double q = second_order_quotient(f, x, v, t, cand);
        for (double eta = 1e-16 * (1.0 + x.norm()) / t; !std::isfinite(q) && eta < 1e-3 * delta; eta *= 2)
            q = second_order_quotient(f, x, v, t, cand + eta * e);
        if (!std::isfinite(q) && feasible) {
            // Walk back toward a certified feasible direction.
            double lo = 0, hi = 1; // fraction toward `feasible`
            for (int b = 0; b < 60; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (std::isfinite(second_order_quotient(f, x, v, t, cand + mid * (*feasible - cand))))
                    hi = mid;
                else
                    lo = mid;
            }
            q = second_order_quotient(f, x, v, t, cand + hi * (*feasible - cand));
        }
        best = std::min(best, q);
    }
    return best;
}

void finish_levels(DiagnosticsReport &rep) {
    const LevelStat &last = rep.levels.back();
    rep.estimate = last.min;
    rep.unbounded = !(last.min <= 1.0 / last.t);
    const size_t L = rep.levels.size();
    if (L >= 3) {
        const double a = rep.levels[L - 1].min, b = rep.levels[L - 2].min, c = rep.levels[L - 3].min;
        const double tol = 1e-6 * (1.0 + std::abs(a));
        rep.stabilized = std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::abs(a - b) <= tol &&
                         std::abs(b - c) <= tol;
    }
}

void require_subgradient(const ConvexFunction &f, const Vec &x, const Vec &v, const char *what) {
    if (!std::isfinite(g_value(f, x)))
        throw InputError(std::string(what) + ": f(x) is not finite");
    if (!subdiff_contains(f, x, v, kMembershipTol))
        throw ContractError(std::string(what) + ": v is not a subgradient at x");
}

} // namespace

DiagnosticsReport second_subderivative_estimate(const ConvexFunction &f, const Vec &x, const Vec &v, const Vec &w,
                                                const QuotientGrid &grid) {
    require_dim(w, f.dim(), "second_subderivative_estimate");
    require_subgradient(f, x, v, "second_subderivative_estimate");
    DiagnosticsReport rep;
    rep.check = "second_subderivative";
    rep.seed = grid.seed;
    const std::vector<double> ts = level_steps(grid, f, x, rep.notes);
    const bool refine = curved(f);
    for (size_t l = 0; l < ts.size(); ++l) {
        const double t = ts[l];
        double best = kInf;
        const Vec *feasible = nullptr;
        std::vector<Vec> dirs = level_directions(grid, static_cast<int>(l), t, w);
        for (const Vec &wp : dirs) {
            const double q = second_order_quotient(f, x, v, t, wp);
            if (q < best) {
                best = q;
                feasible = &wp;
            }
        }
        int count = static_cast<int>(dirs.size());
        if (refine) {
            best = std::min(best, ball_refine(f, x, v, t, w, grid.dir_radius * t, feasible));
            ++count;
        }
        rep.samples += count;
        rep.levels.push_back({t, best, count});
    }
    finish_levels(rep);
    return rep;
}

DiagnosticsReport semi_strict_ssd_estimate(const ConvexFunction &f, const Vec &x, const Vec &v, const Vec &w,
                                           const QuotientGrid &grid, int subgrad_samples) {
    if (!f.has_polyhedral_subdifferential())
        throw CapabilityError("semi_strict_ssd_estimate: " + f.name() + " has no polyhedral subdifferential");
    require_dim(w, f.dim(), "semi_strict_ssd_estimate");
    require_subgradient(f, x, v, "semi_strict_ssd_estimate");
    if (subgrad_samples < 1)
        throw InputError("semi_strict_ssd_estimate: subgrad_samples must be positive");
    DiagnosticsReport rep;
    rep.check = "semi_strict_second_subderivative";
    rep.seed = grid.seed;
    const std::vector<double> ts = level_steps(grid, f, x, rep.notes);
    for (size_t l = 0; l < ts.size(); ++l) {
        const double t = ts[l];
        const SubgradientBall ball{v, grid.dir_radius * t};
        std::vector<Vec> vs{v};
        if (ball.radius > 0) {
            const std::uint64_t s = grid.seed ^ (0x5851f42d4c957f2dULL * (l + 1));
            for (Vec &vp : subdiff_sample(f, x, subgrad_samples, s, &ball))
                vs.push_back(std::move(vp));
        }
        double best = kInf;
        const std::vector<Vec> dirs = level_directions(grid, static_cast<int>(l), t, w);
        for (const Vec &wp : dirs) {
            const double inc = g_increment(f, x, t * wp);
            if (!std::isfinite(inc))
                continue;
            for (const Vec &vp : vs)
                best = std::min(best, (inc - t * vp.dot(wp)) / (0.5 * t * t));
        }
        const int count = static_cast<int>(dirs.size() * vs.size());
        rep.samples += count;
        rep.levels.push_back({t, best, count});
    }
    finish_levels(rep);
    return rep;
}

DiagnosticsReport semi_stability_check(const ConvexFunction &f, const Vec &x, const Vec &v, int cone_samples,
                                       const QuotientGrid &grid) {
    if (!f.has_polyhedral_subdifferential())
        throw CapabilityError("semi_stability_check: " + f.name() + " has no polyhedral subdifferential");
    require_subgradient(f, x, v, "semi_stability_check");
    DiagnosticsReport rep;
    rep.check = "semistab";
    rep.seed = grid.seed;
    const std::vector<Vec> ws = sample_cone_union(critical_cone(f, x, v), cone_samples, grid.seed);
    if (ws.empty()) {
        rep.verdict = Verdict::vacuous;
        rep.notes.push_back("critical cone is {0}");
        return rep;
    }
    double worst = 0, worst_order = -kInf;
    bool ok = true;
    for (const Vec &w : ws) {
        const double d2 = second_subderivative_estimate(f, x, v, w, grid).estimate;
        const double dh = semi_strict_ssd_estimate(f, x, v, w, grid).estimate;
        ++rep.samples;
        if (!std::isfinite(d2) || !std::isfinite(dh)) {
            ok = false;
            rep.witness = w;
            rep.notes.push_back("unbounded estimate on a critical direction");
            continue;
        }
        const double gap = std::abs(dh - d2);
        worst_order = std::max(worst_order, dh - d2);
        if (gap > 1e-4 * (1.0 + std::abs(d2)))
            ok = false;
        if (gap >= worst) {
            worst = gap;
            if (ok)
                rep.witness = w;
        }
    }
    if (worst_order > 1e-10) {
        ok = false;
        rep.notes.push_back("semi-strict estimate exceeded the plain estimate");
    }
    rep.estimate = worst;
    rep.metrics["max_gap"] = worst;
    rep.metrics["max_semi_strict_excess"] = worst_order;
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

DiagnosticsReport sosc_check(const CompositeProblem &p, const KnownSolution &sol, const Vec &y, int sphere_samples,
                             std::uint64_t seed) {
    p.validate();
    require_dim(y, p.m, "sosc_check");
    const Vec &xb = sol.x_bar;
    if (kkt_residual(p, xb, y) > 1e-8)
        throw ContractError("sosc_check: y is not a multiplier at x_bar");
    DiagnosticsReport rep;
    rep.check = "sosc";
    rep.seed = seed;
    const Mat H = lagrangian_hess_xx(p, xb, y);
    const Vec gx = lagrangian_grad_x(p, xb, y);
    const Vec ub = p.Phi.eval(xb);
    const Mat J = p.Phi.jacobian(xb);
    ConeRep Kt;
    try {
        Kt = critical_cone_set(p.theta, xb, -gx);
    } catch (const ContractError &) {
        throw ContractError("sosc_check: y is not a multiplier at x_bar");
    }
    std::vector<ConeRep> D;
    for (const ConeRep &K : critical_cone(p.g, ub, y))
        D.push_back(cone_intersection(Kt, cone_pullback(K, J)));
    const std::vector<Vec> ws = sample_cone_union(D, sphere_samples, seed);
    if (ws.empty()) {
        rep.verdict = Verdict::vacuous;
        rep.estimate = kInf;
        rep.notes.push_back("critical direction set is {0}");
        return rep;
    }
    double margin = kInf;
    bool estimated = false;
    for (const Vec &w : ws) {
        const Vec u = J * w;
        double d2;
        try {
            d2 = second_subderivative_exact(p.g, ub, y, u);
        } catch (const CapabilityError &) {
            QuotientGrid g;
            g.seed = seed;
            d2 = second_subderivative_estimate(p.g, ub, y, u, g).estimate;
            estimated = true;
        }
        const double val = w.dot(H * w) + d2;
        ++rep.samples;
        if (val < margin) {
            margin = val;
            rep.witness = w;
        }
    }
    if (estimated)
        rep.notes.push_back("second subderivative of g estimated by difference quotients");
    rep.estimate = margin;
    rep.metrics["margin"] = margin;
    rep.verdict = margin > 0 ? Verdict::pass : Verdict::fail;
    return rep;
}

DiagnosticsReport uqgc_check(const CompositeProblem &p, const KnownSolution &sol, double gamma,
                             const std::vector<double> &rho_list, int sample_count, double kappa_target,
                             std::uint64_t seed) {
    p.validate();
    if (!(gamma > 0))
        throw InputError("uqgc_check: gamma must be positive");
    if (rho_list.empty() || sample_count < 1)
        throw InputError("uqgc_check: need at least one rho and one sample");
    for (double r : rho_list)
        if (!(r > 0))
            throw InputError("uqgc_check: rho values must be positive");
    DiagnosticsReport rep;
    rep.check = "uqgc";
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    const Vec &xb = sol.x_bar;
    std::vector<double> per_rho(rho_list.size(), kInf);
    double kappa = kInf;
    for (int s = 0; s < sample_count; ++s) {
        const Vec x = project(p.theta, uniform_ball(rng, xb, gamma));
        const Vec y = project(sol.multiplier_set, uniform_ball(rng, sol.reference_multiplier, gamma));
        const double dx = (x - xb).norm();
        if (dx <= 1e-12) {
            ++rep.excluded;
            continue;
        }
        ++rep.samples;
        for (size_t i = 0; i < rho_list.size(); ++i) {
            const AugEvalContext ctx(p, rho_list[i]);
            const double k = 2 * (aug_value(ctx, x, y) - aug_value(ctx, xb, y)) / (dx * dx);
            per_rho[i] = std::min(per_rho[i], k);
            if (k < kappa) {
                kappa = k;
                rep.witness = x;
            }
        }
    }
    if (rep.samples == 0)
        throw InputError("uqgc_check: every sample coincided with x_bar");
    rep.estimate = kappa;
    rep.metrics["kappa"] = kappa;
    rep.metrics["kappa_target"] = kappa_target;
    rep.metrics["rho_min"] = *std::min_element(rho_list.begin(), rho_list.end());
    for (size_t i = 0; i < rho_list.size(); ++i) {
        std::ostringstream key;
        key << "kappa_rho_" << rho_list[i];
        rep.metrics[key.str()] = per_rho[i];
    }
    rep.verdict = kappa >= kappa_target ? Verdict::pass : Verdict::fail;
    return rep;
}

DiagnosticsReport error_bound_estimate(const CompositeProblem &p, const KnownSolution &sol, double radius,
                                       int sample_count, std::uint64_t seed, ErrorBoundSampling mode) {
    p.validate();
    if (!(radius > 0))
        throw InputError("error_bound_estimate: radius must be positive");
    if (sample_count < 1)
        throw InputError("error_bound_estimate: sample_count must be positive");
    DiagnosticsReport rep;
    rep.check = "errbound";
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    const Vec center = vcat(sol.x_bar, sol.reference_multiplier);
    double worst = 0;
    for (int s = 0; s < sample_count; ++s) {
        Vec x, y;
        if (mode == ErrorBoundSampling::ball) {
            const Vec z = uniform_ball(rng, center, radius);
            x = project(p.theta, z.head(p.n));
            y = z.tail(p.m);
        } else {
            x = sol.x_bar;
            y = project(sol.multiplier_set, uniform_ball(rng, sol.reference_multiplier, radius));
        }
        const double r = kkt_residual(p, x, y);
        if (r <= 1e-12) {
            ++rep.excluded;
            continue;
        }
        ++rep.samples;
        const double ratio = ((x - sol.x_bar).norm() + dist_to_polyhedron(sol.multiplier_set, y)) / r;
        if (ratio > worst) {
            worst = ratio;
            rep.witness = vcat(x, y);
        }
    }
    if (rep.excluded > 0)
        rep.notes.push_back(std::to_string(rep.excluded) + " zero-residual samples excluded");
    rep.metrics["excluded"] = rep.excluded;
    if (rep.samples == 0) {
        rep.verdict = Verdict::inconclusive;
        return rep;
    }
    rep.estimate = worst;
    rep.metrics["kappa_eb"] = worst;
    rep.verdict = std::isfinite(worst) ? Verdict::pass : Verdict::fail;
    return rep;
}

double aug_quotient_rhs_infimum(const CompositeProblem &p, const KnownSolution &sol, double rho, double t,
                                const Vec &w) {
    if (!(rho > 0) || !(t > 0))
        throw InputError("aug_quotient_rhs_infimum: rho and t must be positive");
    require_dim(w, p.n, "aug_quotient_rhs_infimum");
    const Vec &yb = sol.reference_multiplier;
    const Vec ub = p.Phi.eval(sol.x_bar);
    const Vec Pp = p.Phi.eval(sol.x_bar + t * w);
    // With z = u_bar + t u, the infimum over u of the g-quotient plus
    // rho ||(Phi_+ - u_bar)/t - u||^2 equals 2/t^2 times
    // inf_z {g(z) - <y, z> + rho/2 ||z - Phi_+||^2} - g(u_bar) + <y, u_bar>,
    // and completing the square turns the inner infimum into an envelope.
    const double inner = moreau_value(p.g, 1.0 / rho, Pp + yb / rho) - yb.dot(Pp) - yb.squaredNorm() / (2 * rho);
    return (inner - g_value(p.g, ub) + yb.dot(ub)) / (0.5 * t * t);
}

DiagnosticsReport aug_quotient_identity_check(const CompositeProblem &p, const KnownSolution &sol, double rho,
                                              const std::vector<double> &t_list, const std::vector<Vec> &w_list) {
    p.validate();
    const AugEvalContext ctx(p, rho);
    const Vec &xb = sol.x_bar;
    const Vec &yb = sol.reference_multiplier;
    const Vec ub = p.Phi.eval(xb);
    const Mat J = p.Phi.jacobian(xb);
    const double L0 = aug_value(ctx, xb, yb);
    const Vec g0 = aug_grad_x(ctx, xb, yb);
    const double phi0 = p.phi.eval(xb);
    const Vec dphi0 = p.phi.grad(xb);
    DiagnosticsReport rep;
    rep.check = "quotient";
    double worst = 0, worst_rel = 0;
    bool ok = true;
    for (double t : t_list)
        for (const Vec &w : w_list) {
            require_dim(w, p.n, "aug_quotient_identity_check");
            const double h = 0.5 * t * t;
            const Vec x = xb + t * w;
            const double lhs = (aug_value(ctx, x, yb) - L0 - t * g0.dot(w)) / h;
            const double qphi = (p.phi.eval(x) - phi0 - t * dphi0.dot(w)) / h;
            const double qpair = (yb.dot(p.Phi.eval(x)) - yb.dot(ub) - t * yb.dot(J * w)) / h;
            const double rhs = qphi + qpair + aug_quotient_rhs_infimum(p, sol, rho, t, w);
            const double err = std::abs(lhs - rhs);
            ++rep.samples;
            worst = std::max(worst, err);
            worst_rel = std::max(worst_rel, err / (1.0 + std::abs(lhs)));
            if (!(err <= 1e-8 * (1.0 + std::abs(lhs)))) {
                ok = false;
                rep.witness = w;
            }
        }
    if (rep.samples == 0)
        throw InputError("aug_quotient_identity_check: empty (t, w) list");
    rep.estimate = worst;
    rep.metrics["max_abs_error"] = worst;
    rep.metrics["max_rel_error"] = worst_rel;
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

DiagnosticsReport consecutive_step_bound_check(const CompositeProblem &p, const KnownSolution &sol,
                                               const std::vector<double> &rho_list, double start_radius,
                                               int samples, std::uint64_t seed) {
    p.validate();
    if (rho_list.empty() || samples < 1)
        throw InputError("consecutive_step_bound_check: need at least one rho and one sample");
    if (!(start_radius >= 0))
        throw InputError("consecutive_step_bound_check: radius must be nonnegative");
    DiagnosticsReport rep;
    rep.check = "stepbound";
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<double> per_rho(rho_list.size(), 0.0);
    double worst = 0;
    int failures = 0;
    for (int s = 0; s < samples; ++s) {
        const Vec x = project(p.theta, uniform_ball(rng, sol.x_bar, start_radius));
        const Vec y = uniform_ball(rng, sol.reference_multiplier, start_radius);
        const double r = kkt_residual(p, x, y);
        if (r <= 1e-12) {
            ++rep.excluded;
            continue;
        }
        ++rep.samples;
        for (size_t i = 0; i < rho_list.size(); ++i) {
            const AugEvalContext ctx(p, rho_list[i]);
            Vec xs;
            try {
                xs = solve_subproblem(ctx, p.theta, y, x, 1e-9 * r, 20000).x;
            } catch (const SubproblemFailed &e) {
                ++failures;
                xs = e.best_iterate;
            }
            const Vec ys = dual_update(ctx, xs, y);
            const double ratio = ((xs - x).norm() + (ys - y).norm()) / r;
            per_rho[i] = std::max(per_rho[i], ratio);
            if (ratio > worst) {
                worst = ratio;
                rep.witness = vcat(x, y);
            }
        }
    }
    if (failures > 0)
        rep.notes.push_back(std::to_string(failures) + " subproblems stopped at the iteration cap");
    if (rep.excluded > 0)
        rep.notes.push_back(std::to_string(rep.excluded) + " zero-residual samples excluded");
    rep.metrics["excluded"] = rep.excluded;
    if (rep.samples == 0) {
        rep.verdict = Verdict::inconclusive;
        return rep;
    }
    rep.estimate = worst;
    rep.metrics["c_emp"] = worst;
    for (size_t i = 0; i < rho_list.size(); ++i) {
        std::ostringstream key;
        key << "c_emp_rho_" << rho_list[i];
        rep.metrics[key.str()] = per_rho[i];
    }
    rep.verdict = std::isfinite(worst) && failures == 0 ? Verdict::pass : Verdict::fail;
    return rep;
}

} // namespace alm
