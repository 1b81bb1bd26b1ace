#include "alm/model.hpp"

#include <string>

#include "alm/errors.hpp"

namespace alm {

void CompositeProblem::validate() const {
    if (n < 0 || m < 0)
        throw InputError("problem: negative dimension");
    if (Phi.in_dim != n || Phi.out_dim != m)
        throw InputError("problem: Phi maps R^" + std::to_string(Phi.in_dim) + " -> R^" +
                         std::to_string(Phi.out_dim) + ", expected R^" + std::to_string(n) + " -> R^" +
                         std::to_string(m));
    if (g.dim() != m)
        throw InputError("problem: g acts on R^" + std::to_string(g.dim()) + ", expected R^" + std::to_string(m));
    if (theta.dim != n)
        throw InputError("problem: theta lives in R^" + std::to_string(theta.dim) + ", expected R^" +
                         std::to_string(n));
    if (!phi.eval || !phi.grad || !Phi.eval || !Phi.jacobian)
        throw InputError("problem: phi and Phi need eval and first derivatives");
}

double lagrangian_value(const CompositeProblem &p, const Vec &x, const Vec &y) {
    require_dim(x, p.n, "x");
    require_dim(y, p.m, "y");
    return p.phi.eval(x) + y.dot(p.Phi.eval(x));
}

Vec lagrangian_grad_x(const CompositeProblem &p, const Vec &x, const Vec &y) {
    require_dim(x, p.n, "x");
    require_dim(y, p.m, "y");
    return p.phi.grad(x) + p.Phi.jacobian(x).transpose() * y;
}

Mat lagrangian_hess_xx(const CompositeProblem &p, const Vec &x, const Vec &y) {
    require_dim(x, p.n, "x");
    require_dim(y, p.m, "y");
    if (!p.phi.hess || !p.Phi.second_directional)
        throw CapabilityError("lagrangian_hess_xx: phi.hess and Phi.second_directional are required");
    Mat H = p.phi.hess(x);
    for (int j = 0; j < p.n; ++j)
        H.col(j) += p.Phi.second_directional(x, y, Vec::Unit(p.n, j));
    return 0.5 * (H + H.transpose());
}

} // namespace alm
