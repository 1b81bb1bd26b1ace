#include "alm/decomposable.hpp"

#include <cmath>

#include "alm/errors.hpp"

namespace alm {

void validate(const DecomposableSpec &spec) {
    if (spec.inner.eval(spec.base).norm() > 1e-12)
        throw InputError("decomposable: inner map does not vanish at the base point");
    if (g_value(spec.outer, Vec::Zero(spec.outer.dim())) != 0.0)
        throw InputError("decomposable: outer function is not zero at the origin");
}

DecomposableSpec soc_reduction(const Vec &u) {
    const Eigen::Index m = u.size();
    if (m < 1)
        throw InputError("soc_reduction: empty vector");
    const double nr = m > 1 ? u.tail(m - 1).norm() : 0.0;
    const double band = 1e-10 * (1.0 + u.norm());
    if (nr > u(0) + band)
        throw InputError("soc_reduction: point is outside the cone");
    if (nr <= band && std::abs(u(0)) <= band)
        throw CapabilityError("soc_reduction: the apex has no reduction");

    DecomposableSpec spec{u, ConvexFunction::nonpositive_orthant(0), SmoothMapping{}};
    spec.inner.in_dim = static_cast<int>(m);
    if (nr < u(0) - band) {
        spec.inner.out_dim = 0;
        spec.inner.eval = [](const Vec &) -> Vec { return Vec(0); };
        spec.inner.jacobian = [m](const Vec &) -> Mat { return Mat(0, m); };
        spec.inner.second_directional = [m](const Vec &, const Vec &, const Vec &) -> Vec {
            return Vec::Zero(m);
        };
        return spec;
    }

    spec.base(0) = nr; // snap onto the boundary
    spec.outer = ConvexFunction::nonpositive_orthant(1);
    spec.inner.out_dim = 1;
    spec.inner.eval = [m](const Vec &x) -> Vec {
        return Vec::Constant(1, x.tail(m - 1).norm() - x(0));
    };
    spec.inner.jacobian = [m](const Vec &x) -> Mat {
        Mat J(1, m);
        J(0, 0) = -1;
        J.rightCols(m - 1) = x.tail(m - 1).transpose() / x.tail(m - 1).norm();
        return J;
    };
    spec.inner.second_directional = [m](const Vec &x, const Vec &mu, const Vec &w) -> Vec {
        const Vec xr = x.tail(m - 1);
        const double n = xr.norm();
        const Vec uh = xr / n;
        const Vec wr = w.tail(m - 1);
        Vec out = Vec::Zero(m);
        out.tail(m - 1) = mu(0) * (wr - uh * uh.dot(wr)) / n;
        return out;
    };
    return spec;
}

Vec reduction_multiplier(const DecomposableSpec &spec, const Vec &ybar) {
    require_dim(ybar, spec.inner.in_dim, "reduction_multiplier");
    const Mat J = spec.inner.jacobian(spec.base);
    if (J.rows() == 0) {
        if (ybar.norm() > kMembershipTol)
            throw ContractError("reduction_multiplier: y is not a subgradient (interior point needs y = 0)");
        return Vec(0);
    }
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(J.transpose());
    if (cod.rank() < J.rows())
        throw CapabilityError("reduction_multiplier: inner Jacobian is not surjective");
    const Vec mu = cod.solve(ybar);
    if ((J.transpose() * mu - ybar).norm() > kMembershipTol * (1.0 + ybar.norm()))
        throw ContractError("reduction_multiplier: y is not in the range of the inner Jacobian adjoint");
    if (!subdiff_contains(spec.outer, Vec::Zero(J.rows()), mu))
        throw ContractError("reduction_multiplier: multiplier is not a subgradient of the outer function");
    return mu;
}

double decomposable_second_subderivative(const DecomposableSpec &spec, const Vec &ybar, const Vec &w) {
    require_dim(w, spec.inner.in_dim, "decomposable_second_subderivative");
    const Vec mu = reduction_multiplier(spec, ybar);
    if (mu.size() == 0)
        return 0.0;
    const double curv = w.dot(spec.inner.second_directional(spec.base, mu, w));
    const Vec xi = spec.inner.jacobian(spec.base) * w;
    const double outer = second_subderivative_exact(spec.outer, Vec::Zero(mu.size()), mu, xi);
    return std::isfinite(outer) ? curv + outer : kInf;
}

std::vector<ConeRep> decomposable_critical_cone(const DecomposableSpec &spec, const Vec &ybar) {
    const Vec mu = reduction_multiplier(spec, ybar);
    const int m = spec.inner.in_dim;
    if (mu.size() == 0)
        return {ConeRep::whole_space(m)};
    const Mat J = spec.inner.jacobian(spec.base);
    std::vector<ConeRep> out;
    for (const ConeRep &K : critical_cone(spec.outer, Vec::Zero(mu.size()), mu)) {
        const Polyhedron &P = K.halfspace;
        out.push_back(ConeRep::from_halfspace(
            Polyhedron(P.A * J, Vec::Zero(P.n_ineq()), P.E * J, Vec::Zero(P.n_eq()))));
    }
    return out;
}

} // namespace alm
