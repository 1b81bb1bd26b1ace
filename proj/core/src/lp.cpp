#include "alm/lp.hpp"

#include <cmath>
#include <vector>

#include "alm/errors.hpp"

namespace alm {

namespace {

// Dense tableau for min cost'z s.t. M z = r, z >= 0 with r >= 0.
// Columns [0, n_struct) are structural, the rest artificial.
class Tableau {
public:
    Tableau(const Mat &M, const Vec &r)
        : rows_(M.rows()), n_struct_(M.cols()), rhs_(M.cols() + M.rows()) {
        T_ = Mat::Zero(rows_ + 1, n_struct_ + rows_ + 1);
        T_.topLeftCorner(rows_, n_struct_) = M;
        T_.block(0, n_struct_, rows_, rows_).setIdentity();
        T_.block(0, cols() , rows_, 1) = r;
        basis_.resize(static_cast<size_t>(rows_));
        for (Eigen::Index i = 0; i < rows_; ++i)
            basis_[i] = static_cast<int>(n_struct_ + i);
        tol_ = 1e-11 * (1.0 + (M.size() > 0 ? M.cwiseAbs().maxCoeff() : 0.0));
    }

    // Number of variable columns; the rhs lives in column cols().
    Eigen::Index cols() const { return rhs_; }

    void set_cost(const Vec &cost) {
        T_.row(rows_).setZero();
        T_.row(rows_).head(cost.size()) = cost.transpose();
        for (Eigen::Index i = 0; i < rows_; ++i) {
            const double cb = basis_[i] < cost.size() ? cost(basis_[i]) : 0.0;
            if (cb != 0)
                T_.row(rows_) -= cb * T_.row(i);
        }
    }

    // Bland's rule. Returns false when unbounded.
    bool run(Eigen::Index allowed_cols, int &pivots) {
        const int cap = 5000 + 200 * static_cast<int>(rows_ + allowed_cols);
        while (true) {
            int enter = -1;
            for (Eigen::Index j = 0; j < allowed_cols; ++j)
                if (T_(rows_, j) < -tol_) {
                    enter = static_cast<int>(j);
                    break;
                }
            if (enter < 0)
                return true;
            int leave = -1;
            double best = kInf;
            for (Eigen::Index i = 0; i < rows_; ++i) {
                const double a = T_(i, enter);
                if (a > tol_) {
                    const double ratio = T_(i, cols()) / a;
                    const double slack = 1e-14 * (1.0 + std::abs(best));
                    if (leave < 0 || ratio < best - slack ||
                        (ratio <= best + slack && basis_[i] < basis_[leave])) {
                        best = std::min(best, ratio);
                        leave = static_cast<int>(i);
                    }
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
            if (++pivots > cap)
                throw NumericalError("lp_optimize: pivot cap exceeded");
        }
    }

    void pivot(Eigen::Index r, Eigen::Index c) {
        T_.row(r) /= T_(r, c);
        for (Eigen::Index i = 0; i <= rows_; ++i)
            if (i != r && T_(i, c) != 0)
                T_.row(i) -= T_(i, c) * T_.row(r);
        T_(r, c) = 1.0;
        basis_[r] = static_cast<int>(c);
    }

    double objective() const { return -T_(rows_, cols()); }

    // Pivot artificial variables out of the basis; drop redundant rows.
    void purge_artificials() {
        for (Eigen::Index i = 0; i < rows_;) {
            if (basis_[i] < n_struct_) {
                ++i;
                continue;
            }
            Eigen::Index c = -1;
            double big = tol_;
            for (Eigen::Index j = 0; j < n_struct_; ++j)
                if (std::abs(T_(i, j)) > big) {
                    big = std::abs(T_(i, j));
                    c = j;
                }
            if (c >= 0) {
                pivot(i, c);
                ++i;
            } else {
                remove_row(i);
            }
        }
    }

    Vec solution() const {
        Vec z = Vec::Zero(n_struct_);
        for (Eigen::Index i = 0; i < rows_; ++i)
            if (basis_[i] < n_struct_)
                z(basis_[i]) = std::max(0.0, T_(i, cols()));
        return z;
    }

private:
    void remove_row(Eigen::Index r) {
        Mat T2(T_.rows() - 1, T_.cols());
        T2.topRows(r) = T_.topRows(r);
        T2.bottomRows(T_.rows() - r - 1) = T_.bottomRows(T_.rows() - r - 1);
        T_ = std::move(T2);
        basis_.erase(basis_.begin() + r);
        --rows_;
    }

    Mat T_;
    std::vector<int> basis_;
    Eigen::Index rows_;
    Eigen::Index n_struct_;
    Eigen::Index rhs_;
    double tol_;
};

struct StandardForm {
    Mat M;
    Vec r;
    int n;
};

// x = xp - xm, slack s for inequalities: [A -A I; E -E 0] z = [b; d].
StandardForm to_standard(const Polyhedron &P) {
    const int n = P.dim, ma = P.n_ineq(), me = P.n_eq();
    StandardForm sf;
    sf.n = n;
    sf.M = Mat::Zero(ma + me, 2 * n + ma);
    sf.r.resize(ma + me);
    if (ma > 0) {
        sf.M.block(0, 0, ma, n) = P.A;
        sf.M.block(0, n, ma, n) = -P.A;
        sf.M.block(0, 2 * n, ma, ma).setIdentity();
        sf.r.head(ma) = P.b;
    }
    if (me > 0) {
        sf.M.block(ma, 0, me, n) = P.E;
        sf.M.block(ma, n, me, n) = -P.E;
        sf.r.tail(me) = P.d;
    }
    for (Eigen::Index i = 0; i < sf.M.rows(); ++i)
        if (sf.r(i) < 0) {
            sf.M.row(i) *= -1;
            sf.r(i) *= -1;
        }
    return sf;
}

// Phase one. Leaves the tableau at a feasible basis with artificials purged.
Tableau phase_one(const StandardForm &sf, int &pivots) {
    Tableau T(sf.M, sf.r);
    const Eigen::Index ns = sf.M.cols();
    Vec cost = Vec::Zero(T.cols());
    cost.tail(T.cols() - ns).setOnes();
    T.set_cost(cost);
    T.run(T.cols(), pivots);
    if (T.objective() > 1e-9 * (1.0 + sf.r.lpNorm<Eigen::Infinity>()))
        throw InfeasibleError("polyhedron is empty");
    T.purge_artificials();
    return T;
}

} // namespace

Vec feasible_point(const Polyhedron &P) {
    if (P.n_ineq() == 0 && P.n_eq() == 0)
        return Vec::Zero(P.dim);
    const StandardForm sf = to_standard(P);
    int pivots = 0;
    const Tableau T = phase_one(sf, pivots);
    const Vec z = T.solution();
    return z.head(sf.n) - z.segment(sf.n, sf.n);
}

LpResult lp_optimize(const Polyhedron &P, const Vec &c) {
    require_dim(c, P.dim, "lp_optimize");
    LpResult res;
    const StandardForm sf = to_standard(P);
    Tableau T = phase_one(sf, res.pivots);
    if (c.lpNorm<Eigen::Infinity>() == 0) {
        const Vec z = T.solution();
        res.x = z.head(sf.n) - z.segment(sf.n, sf.n);
        res.status = LpStatus::degenerate_objective;
        return res;
    }
    Vec cost = Vec::Zero(sf.M.cols());
    cost.head(sf.n) = -c;
    cost.segment(sf.n, sf.n) = c;
    T.set_cost(cost);
    const bool bounded = T.run(sf.M.cols(), res.pivots);
    const Vec z = T.solution();
    res.x = z.head(sf.n) - z.segment(sf.n, sf.n);
    res.value = c.dot(res.x);
    res.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
    if (!bounded)
        res.value = kInf;
    return res;
}

} // namespace alm
