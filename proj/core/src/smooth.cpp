#include "alm/smooth.hpp"

#include <algorithm>

namespace alm {

SmoothMapping SmoothMapping::affine(const Mat &J, const Vec &c) {
    SmoothMapping m;
    m.in_dim = static_cast<int>(J.cols());
    m.out_dim = static_cast<int>(J.rows());
    m.eval = [J, c](const Vec &x) -> Vec { return J * x + c; };
    m.jacobian = [J](const Vec &) -> Mat { return J; };
    const auto n = J.cols();
    m.second_directional = [n](const Vec &, const Vec &, const Vec &) -> Vec {
        return Vec::Zero(n);
    };
    return m;
}

SmoothFunction quadratic_function(const Mat &Q, const Vec &q, double c0) {
    SmoothFunction f;
    f.eval = [Q, q, c0](const Vec &x) { return 0.5 * x.dot(Q * x) + q.dot(x) + c0; };
    f.grad = [Q, q](const Vec &x) -> Vec { return Q * x + q; };
    f.hess = [Q](const Vec &) -> Mat { return Q; };
    return f;
}

double fd_step(const Vec &x) { return 1e-6 * std::max(1.0, x.norm()); }

Vec fd_gradient(const std::function<double(const Vec &)> &f, const Vec &x) {
    const double h = fd_step(x);
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (f(xp) - f(xm)) / (2 * h);
    }
    return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec &)> &F, const Vec &x, int out_dim) {
    const double h = fd_step(x);
    Mat J(out_dim, x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        J.col(i) = (F(xp) - F(xm)) / (2 * h);
    }
    return J;
}

double rel_err(const Vec &a, const Vec &b) { return (a - b).norm() / std::max(1.0, b.norm()); }
double rel_err(const Mat &a, const Mat &b) { return (a - b).norm() / std::max(1.0, b.norm()); }

} // namespace alm
