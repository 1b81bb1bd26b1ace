#include "alm/polyhedron.hpp"

#include <cmath>
#include <functional>

#include "alm/errors.hpp"
#include "alm/nnls.hpp"
#include "alm/qp.hpp"

namespace alm {

Polyhedron::Polyhedron(Mat A_, Vec b_, Mat E_, Vec d_)
    : A(std::move(A_)), b(std::move(b_)), E(std::move(E_)), d(std::move(d_)) {
    dim = static_cast<int>(A.rows() > 0 ? A.cols() : E.cols());
    if (A.rows() > 0 && E.rows() > 0 && A.cols() != E.cols())
        throw InputError("Polyhedron: A and E column counts differ");
    if (A.rows() != b.size() || E.rows() != d.size())
        throw InputError("Polyhedron: right-hand side length mismatch");
    if (A.rows() == 0)
        A.resize(0, dim);
    if (E.rows() == 0)
        E.resize(0, dim);
}

Polyhedron Polyhedron::whole_space(int n) {
    Polyhedron P;
    P.dim = n;
    P.A.resize(0, n);
    P.b.resize(0);
    P.E.resize(0, n);
    P.d.resize(0);
    return P;
}

Polyhedron Polyhedron::box(const Vec &lo, const Vec &hi) {
    require_dim(hi, lo.size(), "Polyhedron::box");
    const int n = static_cast<int>(lo.size());
    std::vector<std::pair<int, double>> rows; // (signed index+1, rhs)
    for (int i = 0; i < n; ++i) {
        if (lo(i) > hi(i))
            throw InputError("Polyhedron::box: lo > hi");
        if (std::isfinite(hi(i)))
            rows.emplace_back(i + 1, hi(i));
        if (std::isfinite(lo(i)))
            rows.emplace_back(-(i + 1), -lo(i));
    }
    Polyhedron P = whole_space(n);
    P.A = Mat::Zero(static_cast<Eigen::Index>(rows.size()), n);
    P.b.resize(static_cast<Eigen::Index>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
        const int s = rows[k].first;
        P.A(static_cast<Eigen::Index>(k), std::abs(s) - 1) = s > 0 ? 1.0 : -1.0;
        P.b(static_cast<Eigen::Index>(k)) = rows[k].second;
    }
    return P;
}

Polyhedron Polyhedron::nonnegative_orthant(int n) {
    Polyhedron P = whole_space(n);
    P.A = -Mat::Identity(n, n);
    P.b = Vec::Zero(n);
    return P;
}

Polyhedron Polyhedron::nonpositive_orthant(int n) {
    Polyhedron P = whole_space(n);
    P.A = Mat::Identity(n, n);
    P.b = Vec::Zero(n);
    return P;
}

double Polyhedron::row_tol(int i, double scale) const { return scale * (1.0 + std::abs(b(i))); }
double Polyhedron::eq_tol(int i, double scale) const { return scale * (1.0 + std::abs(d(i))); }

bool Polyhedron::contains(const Vec &x, double scale) const {
    require_dim(x, dim, "Polyhedron::contains");
    for (int i = 0; i < n_ineq(); ++i)
        if (A.row(i).dot(x) - b(i) > row_tol(i, scale))
            return false;
    for (int i = 0; i < n_eq(); ++i)
        if (std::abs(E.row(i).dot(x) - d(i)) > eq_tol(i, scale))
            return false;
    return true;
}

std::vector<int> Polyhedron::active_set(const Vec &x, double scale) const {
    std::vector<int> I;
    for (int i = 0; i < n_ineq(); ++i)
        if (std::abs(A.row(i).dot(x) - b(i)) <= row_tol(i, scale))
            I.push_back(i);
    return I;
}

Polyhedron Polyhedron::with_equalities(const Mat &E2, const Vec &d2) const {
    return Polyhedron(A, b, vstack(E, E2), vcat(d, d2));
}

Polyhedron Polyhedron::with_inequalities(const Mat &A2, const Vec &b2) const {
    return Polyhedron(vstack(A, A2), vcat(b, b2), E, d);
}

ConeRep ConeRep::from_halfspace(Polyhedron P) {
    ConeRep c;
    c.form = ConeForm::halfspace;
    c.dim = P.dim;
    c.halfspace = std::move(P);
    return c;
}

ConeRep ConeRep::from_generators(std::vector<Vec> gens, int dim) {
    ConeRep c;
    c.form = ConeForm::generators;
    c.dim = dim;
    c.generators = std::move(gens);
    return c;
}

ConeRep ConeRep::whole_space(int n) { return from_halfspace(Polyhedron::whole_space(n)); }

ConeRep ConeRep::origin(int n) {
    Polyhedron P = Polyhedron::whole_space(n);
    P.E = Mat::Identity(n, n);
    P.d = Vec::Zero(n);
    return from_halfspace(P);
}

bool ConeRep::contains(const Vec &w, double tol) const {
    require_dim(w, dim, "ConeRep::contains");
    const double t = tol * std::max(1.0, w.norm());
    if (form == ConeForm::halfspace) {
        const Polyhedron &P = halfspace;
        for (int i = 0; i < P.n_ineq(); ++i)
            if (P.A.row(i).dot(w) > t * std::max(1.0, P.A.row(i).norm()))
                return false;
        for (int i = 0; i < P.n_eq(); ++i)
            if (std::abs(P.E.row(i).dot(w)) > t * std::max(1.0, P.E.row(i).norm()))
                return false;
        return true;
    }
    Mat G(dim, static_cast<Eigen::Index>(generators.size()));
    for (size_t k = 0; k < generators.size(); ++k)
        G.col(static_cast<Eigen::Index>(k)) = generators[k];
    return nnls_solve(G, Mat(dim, 0), w).residual <= t;
}

Vec project(const Polyhedron &P, const Vec &y) {
    require_dim(y, P.dim, "project");
    if (P.n_ineq() == 0 && P.n_eq() == 0)
        return y;
    const Mat H = Mat::Identity(P.dim, P.dim);
    const Vec *start = P.contains(y, 0.0) ? &y : nullptr;
    return qp_solve(H, -y, P, start).x;
}

double normal_cone_distance(const Polyhedron &P, const Vec &x, const Vec &v, double tol_act) {
    require_dim(x, P.dim, "normal_cone_distance");
    require_dim(v, P.dim, "normal_cone_distance");
    if (!P.contains(x, tol_act))
        throw InputError("normal_cone_distance: x is not in the polyhedron");
    const std::vector<int> I = P.active_set(x, tol_act);
    Mat G(P.dim, static_cast<Eigen::Index>(I.size()));
    for (size_t k = 0; k < I.size(); ++k)
        G.col(static_cast<Eigen::Index>(k)) = P.A.row(I[k]).transpose();
    return nnls_solve(G, P.E.transpose(), v).residual;
}

ConeRep tangent_cone(const Polyhedron &P, const Vec &x, double tol_act) {
    require_dim(x, P.dim, "tangent_cone");
    if (!P.contains(x, tol_act))
        throw InputError("tangent_cone: x is not in the polyhedron");
    const std::vector<int> I = P.active_set(x, tol_act);
    Mat AI(static_cast<Eigen::Index>(I.size()), P.dim);
    for (size_t k = 0; k < I.size(); ++k)
        AI.row(static_cast<Eigen::Index>(k)) = P.A.row(I[k]);
    return ConeRep::from_halfspace(
        Polyhedron(AI, Vec::Zero(AI.rows()), P.E, Vec::Zero(P.n_eq())));
}

ConeRep critical_cone_set(const Polyhedron &P, const Vec &x, const Vec &v, double tol) {
    if (normal_cone_distance(P, x, v) > tol)
        throw ContractError("critical_cone_set: v is not a normal vector at x");
    ConeRep T = tangent_cone(P, x);
    if (v.lpNorm<Eigen::Infinity>() == 0)
        return T;
    return ConeRep::from_halfspace(T.halfspace.with_equalities(v.transpose(), Vec::Zero(1)));
}

double dist_to_polyhedron(const Polyhedron &P, const Vec &y) { return (y - project(P, y)).norm(); }

std::vector<Vec> enumerate_vertices(const Polyhedron &P, double tol) {
    const int n = P.dim, ma = P.n_ineq();
    std::vector<Vec> out;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int start) {
        Mat R = P.E;
        Vec r = P.d;
        if (!pick.empty()) {
            Mat Ap(static_cast<Eigen::Index>(pick.size()), n);
            Vec bp(static_cast<Eigen::Index>(pick.size()));
            for (size_t k = 0; k < pick.size(); ++k) {
                Ap.row(static_cast<Eigen::Index>(k)) = P.A.row(pick[k]);
                bp(static_cast<Eigen::Index>(k)) = P.b(pick[k]);
            }
            R = vstack(R, Ap);
            r = vcat(r, bp);
        }
        Eigen::FullPivLU<Mat> lu(R);
        if (R.rows() > 0 && lu.rank() == n) {
            const Vec x = lu.solve(r);
            if ((R * x - r).norm() <= tol * (1.0 + r.norm()) && P.contains(x, tol)) {
                bool dup = false;
                for (const Vec &u : out)
                    dup = dup || (u - x).norm() <= 1e-9 * (1.0 + x.norm());
                if (!dup)
                    out.push_back(x);
            }
            return;
        }
        if (R.rows() > 0 && lu.rank() < R.rows())
            return; // dependent rows: covered by a smaller subset
        for (int i = start; i < ma; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    if (n == 0)
        return {Vec(0)};
    rec(0);
    return out;
}

} // namespace alm
