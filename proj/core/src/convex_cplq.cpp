#include <algorithm>
#include <cmath>
#include <random>

#include "alm/errors.hpp"
#include "alm/lp.hpp"
#include "alm/qp.hpp"
#include "convex_detail.hpp"

namespace alm::detail {

namespace {

constexpr double kActive = 1e-9;

Mat active_rows(const Polyhedron &P, const std::vector<int> &I) {
    Mat AI(static_cast<Eigen::Index>(I.size()), P.dim);
    for (size_t k = 0; k < I.size(); ++k)
        AI.row(static_cast<Eigen::Index>(k)) = P.A.row(I[k]);
    return AI;
}

Vec piece_gradient(const CplqPiece &p, const Vec &z) { return p.A * z + p.a; }

} // namespace

Polyhedron normal_cone_lifted(const Polyhedron &P, const Vec &z, const Vec &offset) {
    const int m = P.dim;
    const std::vector<int> I = P.active_set(z, kActive);
    const Mat AI = active_rows(P, I);
    const int ni = static_cast<int>(I.size()), ne = P.n_eq();
    const int nl = m + ni + ne;
    Mat E(m, nl);
    E << Mat::Identity(m, m), -AI.transpose(), -P.E.transpose();
    Mat A = Mat::Zero(ni, nl);
    for (int k = 0; k < ni; ++k)
        A(k, m + k) = -1;
    return Polyhedron(A, Vec::Zero(ni), E, offset);
}

double subgradient_scale(const ConvexFunction &h, const Vec &z) {
    if (const auto *l = std::get_if<L1Norm>(&h.variant()))
        return l->weight;
    if (const auto *c = std::get_if<Cplq>(&h.variant())) {
        double s = 0;
        for (int i : cplq_active_pieces(*c, z))
            s = std::max(s, piece_gradient(c->pieces[static_cast<size_t>(i)], z).lpNorm<Eigen::Infinity>());
        return s;
    }
    return 0.0;
}

double cplq_piece_value(const CplqPiece &p, const Vec &z) { return 0.5 * z.dot(p.A * z) + p.a.dot(z) + p.alpha; }

std::vector<int> cplq_active_pieces(const Cplq &c, const Vec &z) {
    std::vector<int> out;
    for (size_t i = 0; i < c.pieces.size(); ++i)
        if (c.pieces[i].region.contains(z, kActive))
            out.push_back(static_cast<int>(i));
    return out;
}

Cplq validate_cplq(std::vector<CplqPiece> pieces, std::uint64_t seed) {
    if (pieces.empty())
        throw InputError("cplq: at least one piece is required");
    const int n = pieces[0].region.dim;
    for (CplqPiece &p : pieces) {
        if (p.region.dim != n || p.A.rows() != n || p.A.cols() != n || p.a.size() != n)
            throw InputError("cplq: piece dimensions disagree");
        if ((p.A - p.A.transpose()).norm() > 1e-12 * (1.0 + p.A.norm()))
            throw InputError("cplq: piece matrix is not symmetric");
        p.A = 0.5 * (p.A + p.A.transpose());
        if (n > 0) {
            Eigen::SelfAdjointEigenSolver<Mat> es(p.A, Eigen::EigenvaluesOnly);
            if (es.eigenvalues()(0) < -1e-12 * (1.0 + p.A.norm()))
                throw InputError("cplq: piece matrix is not positive semidefinite");
        }
        try {
            feasible_point(p.region);
        } catch (const InfeasibleError &) {
            throw InputError("cplq: empty piece region");
        }
    }

    // Sample overlaps of every pair inside a bounding box and compare values.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double R = 10.0;
    Mat Ab(2 * n, n);
    Ab << Mat::Identity(n, n), -Mat::Identity(n, n);
    const Vec bb = Vec::Constant(2 * n, R);
    for (size_t i = 0; i < pieces.size(); ++i)
        for (size_t j = i + 1; j < pieces.size(); ++j) {
            const Polyhedron &Ci = pieces[i].region;
            const Polyhedron &Cj = pieces[j].region;
            Polyhedron both(vstack(vstack(Ci.A, Cj.A), Ab), vcat(vcat(Ci.b, Cj.b), bb), vstack(Ci.E, Cj.E),
                            vcat(Ci.d, Cj.d));
            std::vector<Vec> pts;
            try {
                for (int k = 0; k < 2 * n + 4; ++k) {
                    Vec cdir(n);
                    for (int q = 0; q < n; ++q)
                        cdir(q) = normal(rng);
                    pts.push_back(lp_optimize(both, cdir).x);
                }
            } catch (const InfeasibleError &) {
                continue; // pieces do not meet inside the box
            }
            const size_t nv = pts.size();
            for (size_t a = 0; a < nv; ++a)
                pts.push_back(0.5 * (pts[a] + pts[(a + 1) % nv]));
            for (const Vec &x : pts) {
                const double fi = cplq_piece_value(pieces[i], x), fj = cplq_piece_value(pieces[j], x);
                if (std::abs(fi - fj) > 1e-9 * (1.0 + std::abs(fi)))
                    throw InputError("cplq: pieces " + std::to_string(i) + " and " + std::to_string(j) +
                                     " disagree on their overlap");
            }
        }
    return Cplq{std::move(pieces), n};
}

double cplq_value(const Cplq &c, const Vec &z) {
    const std::vector<int> act = cplq_active_pieces(c, z);
    if (act.empty())
        return kInf;
    return cplq_piece_value(c.pieces[static_cast<size_t>(act.front())], z);
}

double cplq_increment(const Cplq &c, const Vec &z, const Vec &d) {
    // Prefer a piece that contains both z and the step: the increment is then
    // the exact Taylor expansion of that piece's quadratic.
    for (int i : cplq_active_pieces(c, z)) {
        const CplqPiece &p = c.pieces[static_cast<size_t>(i)];
        if (step_feasible(p.region, z, d))
            return piece_gradient(p, z).dot(d) + 0.5 * d.dot(p.A * d);
    }
    const double f1 = cplq_value(c, z + d);
    return std::isfinite(f1) ? f1 - cplq_value(c, z) : kInf;
}

CplqProx cplq_prox(const Cplq &c, double r, const Vec &y) {
    const int n = c.dim;
    CplqProx best{Vec(), kInf};
    double best_obj = kInf;
    for (const CplqPiece &p : c.pieces) {
        const Mat H = p.A + Mat::Identity(n, n) / r;
        const Vec f = p.a - y / r;
        QpResult q;
        try {
            q = qp_solve(H, f, p.region);
        } catch (const InfeasibleError &) {
            continue;
        } catch (const NumericalError &e) {
            throw NumericalError(std::string("cplq prox: piece QP failed: ") + e.what());
        }
        const double val = cplq_piece_value(p, q.x);
        const double obj = val + (y - q.x).squaredNorm() / (2 * r);
        if (!std::isfinite(best_obj) || obj < best_obj - 1e-15 * (1.0 + std::abs(best_obj))) {
            best_obj = obj;
            best = {q.x, val};
        }
    }
    if (!std::isfinite(best_obj))
        throw NumericalError("cplq prox: no piece produced a minimizer");
    return best;
}

Polyhedron cplq_subdifferential(const Cplq &c, const Vec &z) {
    const int m = c.dim;
    const std::vector<int> act = cplq_active_pieces(c, z);
    if (act.empty())
        throw InputError("cplq: z is outside the domain");
    // Variables: v, then (lambda_i, mu_i) for each active piece.
    std::vector<Mat> blocks;
    std::vector<Vec> offsets;
    int extra = 0;
    for (int i : act) {
        const CplqPiece &p = c.pieces[static_cast<size_t>(i)];
        const std::vector<int> I = p.region.active_set(z, kActive);
        Mat B(m, static_cast<Eigen::Index>(I.size()) + p.region.n_eq());
        B << active_rows(p.region, I).transpose(), p.region.E.transpose();
        blocks.push_back(B);
        offsets.push_back(piece_gradient(p, z));
        extra += static_cast<int>(B.cols());
    }
    const int nl = m + extra;
    Mat E = Mat::Zero(m * static_cast<int>(act.size()), nl);
    Vec d(E.rows());
    std::vector<int> nonneg;
    int col = m;
    for (size_t k = 0; k < act.size(); ++k) {
        const int r0 = m * static_cast<int>(k);
        E.block(r0, 0, m, m).setIdentity();
        E.block(r0, col, m, blocks[k].cols()) = -blocks[k];
        d.segment(r0, m) = offsets[k];
        const int nI = static_cast<int>(blocks[k].cols()) -
                       c.pieces[static_cast<size_t>(act[k])].region.n_eq();
        for (int q = 0; q < nI; ++q)
            nonneg.push_back(col + q);
        col += static_cast<int>(blocks[k].cols());
    }
    Mat A = Mat::Zero(static_cast<Eigen::Index>(nonneg.size()), nl);
    for (size_t q = 0; q < nonneg.size(); ++q)
        A(static_cast<Eigen::Index>(q), nonneg[q]) = -1;
    return Polyhedron(A, Vec::Zero(A.rows()), E, d);
}

double cplq_subderivative(const Cplq &c, const Vec &z, const Vec &w) {
    for (int i : cplq_active_pieces(c, z)) {
        const CplqPiece &p = c.pieces[static_cast<size_t>(i)];
        if (tangent_cone(p.region, z).contains(w, 1e-12))
            return piece_gradient(p, z).dot(w);
    }
    return kInf;
}

double cplq_second_subderivative(const Cplq &c, const Vec &z, const Vec &v, const Vec &w) {
    double best = kInf;
    const double tol = 1e-9 * std::max(1.0, w.norm());
    for (int i : cplq_active_pieces(c, z)) {
        const CplqPiece &p = c.pieces[static_cast<size_t>(i)];
        const Vec vbar = v - piece_gradient(p, z);
        if (!tangent_cone(p.region, z).contains(w, 1e-9))
            continue;
        if (std::abs(vbar.dot(w)) > tol)
            continue;
        best = std::min(best, w.dot(p.A * w));
    }
    return best;
}

std::vector<ConeRep> cplq_critical_cone(const Cplq &c, const Vec &z, const Vec &v) {
    std::vector<ConeRep> out;
    for (int i : cplq_active_pieces(c, z)) {
        const CplqPiece &p = c.pieces[static_cast<size_t>(i)];
        const Vec vbar = v - piece_gradient(p, z);
        try {
            out.push_back(critical_cone_set(p.region, z, vbar));
        } catch (const ContractError &) {
            throw ContractError("critical_cone: v is not a subgradient at z");
        }
    }
    if (out.empty())
        throw InputError("critical_cone: z is outside the domain");
    return out;
}

} // namespace alm::detail
