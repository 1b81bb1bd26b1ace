#pragma once

#include "alm/model.hpp"

namespace alm {

struct AugEvalContext {
    AugEvalContext(const CompositeProblem &problem, double rho);
    const CompositeProblem *problem;
    double rho;
};

/// Everything the inner solver needs from one evaluation at (x, y).
struct AugPoint {
    double value;
    Vec grad_x;
    Vec Phi;     // Phi(x)
    Vec prox;    // prox_{g/rho}(Phi(x) + y/rho)
    Vec dual;    // rho (Phi(x) + y/rho - prox), the updated multiplier
};

AugPoint aug_evaluate(const AugEvalContext &ctx, const Vec &x, const Vec &y);

double aug_value(const AugEvalContext &ctx, const Vec &x, const Vec &y);
Vec aug_grad_x(const AugEvalContext &ctx, const Vec &x, const Vec &y);
Vec aug_grad_y(const AugEvalContext &ctx, const Vec &x, const Vec &y);
Vec dual_update(const AugEvalContext &ctx, const Vec &x, const Vec &y);

/// dist(-grad_x L(x, y), N_theta(x)) + ||Phi(x) - prox_g(Phi(x) + y)||.
/// x must lie in theta (InputError otherwise).
double kkt_residual(const CompositeProblem &p, const Vec &x, const Vec &y,
                    double tol_act = kDefaultActivity);

} // namespace alm
