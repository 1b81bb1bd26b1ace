#include "alm/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "alm/errors.hpp"
#include "alm/lp.hpp"

namespace alm {

namespace {

struct EqpSolution {
    Vec x;
    Vec mult; // one per row of R
};

// min 1/2 x'Hx + f'x s.t. R x = rhs, via the range-space equations.
EqpSolution solve_eqp(const Eigen::LLT<Mat> &chol, const Vec &f, const Mat &R, const Vec &rhs) {
    EqpSolution s;
    const Vec Hf = chol.solve(f);
    if (R.rows() == 0) {
        s.x = -Hf;
        s.mult.resize(0);
        return s;
    }
    const Mat HRt = chol.solve(R.transpose());
    const Mat K = R * HRt;
    const Vec rhs2 = -rhs - R * Hf;
    s.mult = K.completeOrthogonalDecomposition().solve(rhs2);
    s.x = -Hf - HRt * s.mult;
    return s;
}

} // namespace

QpResult qp_solve(const Mat &H, const Vec &f, const Polyhedron &P, const Vec *x0) {
    const int n = P.dim;
    if (H.rows() != n || H.cols() != n)
        throw InputError("qp_solve: Hessian dimension mismatch");
    require_dim(f, n, "qp_solve");
    Eigen::LLT<Mat> chol(H);
    if (chol.info() != Eigen::Success)
        throw InputError("qp_solve: Hessian is not positive definite");

    Vec x = (x0 != nullptr && x0->size() == n && P.contains(*x0)) ? *x0 : feasible_point(P);
    const int ma = P.n_ineq(), me = P.n_eq();
    std::vector<int> W; // working inequality rows
    QpResult res;
    res.lambda = Vec::Zero(ma);
    res.mu = Vec::Zero(me);
    const int cap = 50 * std::max(n, 1) + 2 * ma;
    const double scale = 1.0 + f.lpNorm<Eigen::Infinity>() + H.lpNorm<Eigen::Infinity>();

    for (int it = 0;; ++it) {
        if (it > cap)
            throw NumericalError("qp_solve: iteration cap exceeded");
        res.iterations = it;
        Mat R(me + static_cast<int>(W.size()), n);
        Vec rhs(R.rows());
        if (me > 0) {
            R.topRows(me) = P.E;
            rhs.head(me) = P.d;
        }
        for (size_t k = 0; k < W.size(); ++k) {
            R.row(me + static_cast<Eigen::Index>(k)) = P.A.row(W[k]);
            rhs(me + static_cast<Eigen::Index>(k)) = P.b(W[k]);
        }
        const EqpSolution eq = solve_eqp(chol, f, R, rhs);
        const Vec p = eq.x - x;
        const double pn = p.norm();

        if (pn <= 1e-13 * (1.0 + x.norm())) {
            x = eq.x;
            int drop = -1;
            double worst = -1e-11 * scale;
            for (size_t k = 0; k < W.size(); ++k) {
                const double lam = eq.mult(me + static_cast<Eigen::Index>(k));
                if (lam < worst) {
                    worst = lam;
                    drop = static_cast<int>(k);
                }
            }
            if (drop < 0) {
                res.lambda.setZero();
                for (size_t k = 0; k < W.size(); ++k)
                    res.lambda(W[k]) = std::max(0.0, eq.mult(me + static_cast<Eigen::Index>(k)));
                if (me > 0)
                    res.mu = eq.mult.head(me);
                break;
            }
            W.erase(W.begin() + drop);
            continue;
        }

        double alpha = 1.0;
        int block = -1;
        for (int i = 0; i < ma; ++i) {
            if (std::find(W.begin(), W.end(), i) != W.end())
                continue;
            const double ap = P.A.row(i).dot(p);
            if (ap <= 1e-12 * P.A.row(i).norm() * pn)
                continue;
            const double slack = std::max(0.0, P.b(i) - P.A.row(i).dot(x));
            const double a = slack / ap;
            if (a < alpha) {
                alpha = a;
                block = i;
            }
        }
        if (block < 0) {
            x = eq.x;
        } else {
            x += alpha * p;
            W.push_back(block);
        }
    }

    res.x = x;
    res.objective = 0.5 * x.dot(H * x) + f.dot(x);
    return res;
}

double qp_kkt_residual(const Mat &H, const Vec &f, const Polyhedron &P, const QpResult &r) {
    Vec stat = H * r.x + f;
    if (P.n_ineq() > 0)
        stat += P.A.transpose() * r.lambda;
    if (P.n_eq() > 0)
        stat += P.E.transpose() * r.mu;
    double worst = stat.lpNorm<Eigen::Infinity>();
    for (int i = 0; i < P.n_ineq(); ++i) {
        const double slack = P.b(i) - P.A.row(i).dot(r.x);
        worst = std::max(worst, -slack);
        worst = std::max(worst, -r.lambda(i));
        worst = std::max(worst, std::abs(r.lambda(i) * slack));
    }
    for (int i = 0; i < P.n_eq(); ++i)
        worst = std::max(worst, std::abs(P.E.row(i).dot(r.x) - P.d(i)));
    return worst;
}

} // namespace alm
