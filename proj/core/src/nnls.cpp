#include "alm/nnls.hpp"

#include <vector>

#include "alm/errors.hpp"

namespace alm {

namespace {

Mat columns(const Mat &M, const std::vector<int> &idx) {
    Mat out(M.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k)
        out.col(static_cast<Eigen::Index>(k)) = M.col(idx[k]);
    return out;
}

} // namespace

NnlsResult nnls_solve(const Mat &G, const Mat &F, const Vec &target) {
    const Eigen::Index m = target.size();
    const Eigen::Index k = G.cols();
    if ((k > 0 && G.rows() != m) || (F.cols() > 0 && F.rows() != m))
        throw InputError("nnls_solve: row count mismatch");

    // Project out range(F).
    Mat Gt = G;
    Vec tt = target;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod;
    if (F.cols() > 0) {
        cod.compute(F);
        if (k > 0)
            Gt = G - F * cod.solve(G);
        tt = target - F * cod.solve(target);
    }

    Vec c = Vec::Zero(k);
    if (k > 0) {
        const double tol = 1e-13 * (1.0 + Gt.norm()) * (1.0 + tt.norm());
        std::vector<bool> passive(static_cast<size_t>(k), false);
        Vec w = Gt.transpose() * tt;
        const int cap = 3 * static_cast<int>(k) + 30;
        int outer = 0;
        while (true) {
            int j = -1;
            double best = tol;
            for (Eigen::Index i = 0; i < k; ++i)
                if (!passive[i] && w(i) > best) {
                    best = w(i);
                    j = static_cast<int>(i);
                }
            if (j < 0)
                break;
            if (++outer > cap)
                throw NumericalError("nnls_solve: iteration cap exceeded");
            passive[j] = true;
            while (true) {
                std::vector<int> P;
                for (Eigen::Index i = 0; i < k; ++i)
                    if (passive[i])
                        P.push_back(static_cast<int>(i));
                Vec sP = columns(Gt, P).completeOrthogonalDecomposition().solve(tt);
                Vec s = Vec::Zero(k);
                for (size_t q = 0; q < P.size(); ++q)
                    s(P[q]) = sP(static_cast<Eigen::Index>(q));
                bool positive = true;
                for (int i : P)
                    if (s(i) <= 0)
                        positive = false;
                if (positive) {
                    c = s;
                    break;
                }
                double alpha = 1.0;
                for (int i : P)
                    if (s(i) <= 0) {
                        const double den = c(i) - s(i);
                        if (den > 0)
                            alpha = std::min(alpha, c(i) / den);
                    }
                c += alpha * (s - c);
                for (int i : P)
                    if (c(i) <= 1e-15 * (1.0 + c.lpNorm<Eigen::Infinity>())) {
                        c(i) = 0;
                        passive[i] = false;
                    }
                if (++outer > cap)
                    throw NumericalError("nnls_solve: iteration cap exceeded");
            }
            w = Gt.transpose() * (tt - Gt * c);
        }
    }

    Vec f(F.cols());
    Vec r = k > 0 ? Vec(target - G * c) : target;
    if (F.cols() > 0) {
        f = cod.solve(r);
        r -= F * f;
    }
    return {c, f, r.norm()};
}

} // namespace alm
