#include "alm/augmented.hpp"

#include "alm/errors.hpp"

namespace alm {

AugEvalContext::AugEvalContext(const CompositeProblem &problem_, double rho_) : problem(&problem_), rho(rho_) {
    if (!(rho > 0) || !std::isfinite(rho))
        throw InputError("augmented Lagrangian: rho must be positive and finite");
}

AugPoint aug_evaluate(const AugEvalContext &ctx, const Vec &x, const Vec &y) {
    const CompositeProblem &p = *ctx.problem;
    require_dim(x, p.n, "x");
    require_dim(y, p.m, "y");
    const double r = 1.0 / ctx.rho;
    AugPoint out;
    out.Phi = p.Phi.eval(x);
    const Vec u = out.Phi + y * r;
    ProxEval pe = prox_eval(p.g, r, u);
    out.prox = std::move(pe.point);
    // (u - prox) / r, written so the fixed point y = rho u is reproduced exactly
    // when prox vanishes.
    out.dual = ctx.rho * out.Phi + y - ctx.rho * out.prox;
    out.value = p.phi.eval(x) + pe.value + (u - out.prox).squaredNorm() / (2 * r) - y.squaredNorm() * r / 2;
    out.grad_x = p.phi.grad(x) + p.Phi.jacobian(x).transpose() * out.dual;
    return out;
}

double aug_value(const AugEvalContext &ctx, const Vec &x, const Vec &y) { return aug_evaluate(ctx, x, y).value; }

Vec aug_grad_x(const AugEvalContext &ctx, const Vec &x, const Vec &y) { return aug_evaluate(ctx, x, y).grad_x; }

Vec aug_grad_y(const AugEvalContext &ctx, const Vec &x, const Vec &y) {
    const AugPoint a = aug_evaluate(ctx, x, y);
    return a.Phi - a.prox;
}

Vec dual_update(const AugEvalContext &ctx, const Vec &x, const Vec &y) { return aug_evaluate(ctx, x, y).dual; }

double kkt_residual(const CompositeProblem &p, const Vec &x, const Vec &y, double tol_act) {
    require_dim(x, p.n, "x");
    require_dim(y, p.m, "y");
    if (!p.theta.contains(x, tol_act))
        throw InputError("kkt_residual: x is not in theta");
    const Vec gx = lagrangian_grad_x(p, x, y);
    const Vec Phi = p.Phi.eval(x);
    return normal_cone_distance(p.theta, x, -gx, tol_act) + (Phi - prox(p.g, 1.0, Phi + y)).norm();
}

} // namespace alm
