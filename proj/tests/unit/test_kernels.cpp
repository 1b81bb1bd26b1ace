#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "alm/errors.hpp"
#include "alm/lp.hpp"
#include "alm/nnls.hpp"
#include "alm/polyhedron.hpp"
#include "alm/qp.hpp"

using namespace alm;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// {y >= 0, y1 + 2 y2 = 1}
Polyhedron segment() {
    Polyhedron P = Polyhedron::nonnegative_orthant(2);
    return P.with_equalities((Mat(1, 2) << 1, 2).finished(), Vec::Constant(1, 1.0));
}

Polyhedron random_polytope(std::mt19937 &rng, int n, int rows) {
    std::normal_distribution<double> N(0, 1);
    Mat A(rows, n);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = N(rng);
    // Contains a ball around the origin so it is nonempty.
    Vec b = Vec::Constant(rows, 1.0);
    Polyhedron P(A, b, Mat(0, n), Vec(0));
    return P.with_inequalities(Mat::Identity(n, n), Vec::Constant(n, 3.0))
        .with_inequalities(-Mat::Identity(n, n), Vec::Constant(n, 3.0));
}

Vec random_vec(std::mt19937 &rng, int n, double s) {
    std::normal_distribution<double> N(0, s);
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = N(rng);
    return v;
}

} // namespace

TEST(Project, BoxClamp) {
    const Polyhedron B = Polyhedron::box(v2(0, 0), v2(1, 1));
    const Vec p = project(B, v2(2, -1));
    EXPECT_NEAR(p(0), 1.0, 1e-14);
    EXPECT_NEAR(p(1), 0.0, 1e-14);
}

TEST(Project, WholeSpaceIsIdentity) {
    const Vec y = v2(3.5, -7);
    EXPECT_EQ(project(Polyhedron::whole_space(2), y), y);
}

TEST(Project, SegmentMatchesScanOfParameterization) {
    // Oracle: scan y(s) = (1 - 2s, s), s in [0, 1/2].
    const Vec y = v2(2, 0);
    double best = kInf, sb = 0;
    for (int k = 0; k <= 200000; ++k) {
        const double s = 0.5 * k / 200000.0;
        const double dv = (v2(1 - 2 * s, s) - y).squaredNorm();
        if (dv < best) {
            best = dv;
            sb = s;
        }
    }
    const Vec p = project(segment(), y);
    EXPECT_NEAR(p(0), 1 - 2 * sb, 1e-5);
    EXPECT_NEAR(p(1), sb, 1e-5);
    EXPECT_NEAR(p(0), 1.0, 1e-12);
    EXPECT_NEAR(p(1), 0.0, 1e-12);
}

TEST(Project, EmptyPolyhedronThrows) {
    Polyhedron P = Polyhedron::box(v2(0, 0), v2(1, 1));
    P = P.with_equalities((Mat(1, 2) << 1, 0).finished(), Vec::Constant(1, 5.0));
    EXPECT_THROW(project(P, v2(0, 0)), InfeasibleError);
}

TEST(Project, KktCertificateAndFirmNonexpansiveness) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 4;
        const Polyhedron P = random_polytope(rng, n, 2 + trial % 5);
        const Vec y1 = random_vec(rng, n, 3), y2 = random_vec(rng, n, 3);
        const QpResult r = qp_solve(Mat::Identity(n, n), -y1, P);
        EXPECT_LE(qp_kkt_residual(Mat::Identity(n, n), -y1, P, r), 1e-9);
        const Vec p1 = project(P, y1), p2 = project(P, y2);
        EXPECT_LE((p1 - p2).squaredNorm(), (p1 - p2).dot(y1 - y2) + 1e-10);
        EXPECT_LE((project(P, p1) - p1).norm(), 1e-12);
        // Normal cone definition: <y - p, z - p> <= 0 for z in P.
        const Vec v = y1 - p1;
        for (int k = 0; k < 100; ++k) {
            const Vec z = project(P, random_vec(rng, n, 3));
            EXPECT_LE(v.dot(z - p1), 1e-10 * (1 + v.norm()));
        }
    }
}

TEST(NormalConeDistance, Examples) {
    const Polyhedron Rp = Polyhedron::nonnegative_orthant(2);
    EXPECT_NEAR(normal_cone_distance(Rp, v2(0, 1), v2(-1, 1)), 1.0, 1e-12);
    EXPECT_NEAR(normal_cone_distance(Polyhedron::whole_space(2), v2(4, 4), v2(3, 4)), 5.0, 1e-12);
    EXPECT_NEAR(normal_cone_distance(Rp, v2(0, 0), v2(-2, -3)), 0.0, 1e-14);
    EXPECT_THROW(normal_cone_distance(Rp, v2(-1, 0), v2(0, 0)), InputError);
}

TEST(NormalConeDistance, ZeroOnProjectionResiduals) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 3;
        const Polyhedron P = random_polytope(rng, n, 3);
        const Vec y = random_vec(rng, n, 4);
        const Vec p = project(P, y);
        EXPECT_LE(normal_cone_distance(P, p, y - p), 1e-9);
    }
}

TEST(TangentCone, Examples) {
    const ConeRep T = tangent_cone(Polyhedron::nonnegative_orthant(2), v2(0, 1));
    EXPECT_TRUE(T.contains(v2(1, -5)));
    EXPECT_FALSE(T.contains(v2(-1, 0)));
    const ConeRep Ti = tangent_cone(Polyhedron::box(v2(0, 0), v2(1, 1)), v2(0.5, 0.5));
    EXPECT_TRUE(Ti.contains(v2(-3, 7)));
    Polyhedron P((Mat(2, 1) << 1, 2).finished(), Vec::Zero(2), Mat(0, 1), Vec(0));
    const ConeRep T2 = tangent_cone(P, Vec::Zero(1));
    EXPECT_EQ(T2.halfspace.n_ineq(), 2);
    EXPECT_TRUE(T2.contains(Vec::Constant(1, -1.0)));
    EXPECT_FALSE(T2.contains(Vec::Constant(1, 1.0)));
}

TEST(CriticalCone, Examples) {
    const Polyhedron Rp = Polyhedron::nonnegative_orthant(2);
    const ConeRep K = critical_cone_set(Rp, v2(0, 0), v2(-1, 0));
    EXPECT_TRUE(K.contains(v2(0, 2)));
    EXPECT_FALSE(K.contains(v2(1, 0)));
    EXPECT_FALSE(K.contains(v2(0, -1)));
    const ConeRep T = critical_cone_set(Rp, v2(0, 1), v2(0, 0));
    EXPECT_TRUE(T.contains(v2(1, -1)));
    EXPECT_THROW(critical_cone_set(Polyhedron::whole_space(2), v2(0, 0), v2(1, 0)), ContractError);
    EXPECT_TRUE(critical_cone_set(Polyhedron::whole_space(2), v2(0, 0), v2(0, 0)).contains(v2(5, 5)));
}

TEST(DistToPolyhedron, SegmentExamples) {
    const Polyhedron M = segment();
    EXPECT_NEAR(dist_to_polyhedron(M, v2(1, 0)), 0.0, 1e-14);
    EXPECT_NEAR(dist_to_polyhedron(M, v2(2, 0)), 1.0, 1e-12);
    EXPECT_NEAR(dist_to_polyhedron(M, v2(0, 0)), 1.0 / std::sqrt(5.0), 1e-12);
}

TEST(Nnls, Examples) {
    const NnlsResult r = nnls_solve((Mat(2, 1) << -1, 0).finished(), Mat(2, 0), v2(-1, 1));
    EXPECT_NEAR(r.coeffs(0), 1.0, 1e-14);
    EXPECT_NEAR(r.residual, 1.0, 1e-14);
    const NnlsResult in = nnls_solve(Mat::Identity(2, 2), Mat(2, 0), v2(2, 3));
    EXPECT_NEAR(in.residual, 0.0, 1e-14);
    const NnlsResult e = nnls_solve(Mat(2, 0), Mat(2, 0), v2(3, 4));
    EXPECT_NEAR(e.residual, 5.0, 1e-14);
}

TEST(Nnls, KktConditionsOnRandomInstances) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 3 + trial % 4, k = 1 + trial % 6, f = trial % 2;
        Mat G(m, k), F(m, f);
        for (int j = 0; j < k; ++j)
            G.col(j) = random_vec(rng, m, 1);
        for (int j = 0; j < f; ++j)
            F.col(j) = random_vec(rng, m, 1);
        const Vec t = random_vec(rng, m, 2);
        const NnlsResult r = nnls_solve(G, F, t);
        const Vec res = t - G * r.coeffs - F * r.free;
        const Vec gw = G.transpose() * res;
        for (int j = 0; j < k; ++j) {
            EXPECT_GE(r.coeffs(j), 0.0);
            EXPECT_LE(gw(j), 1e-10);
            EXPECT_LE(std::abs(r.coeffs(j) * gw(j)), 1e-10);
        }
        if (f > 0)
            EXPECT_LE((F.transpose() * res).norm(), 1e-10);
        EXPECT_NEAR(r.residual, res.norm(), 1e-12);
    }
}

TEST(Lp, Examples) {
    const LpResult r = lp_optimize(segment(), v2(1, 0));
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.x(0), 1.0, 1e-12);
    EXPECT_NEAR(r.x(1), 0.0, 1e-12);
    const LpResult r2 = lp_optimize(segment(), v2(0, 1));
    EXPECT_NEAR(r2.x(0), 0.0, 1e-12);
    EXPECT_NEAR(r2.x(1), 0.5, 1e-12);
    const LpResult d = lp_optimize(segment(), v2(0, 0));
    EXPECT_EQ(d.status, LpStatus::degenerate_objective);
    EXPECT_TRUE(segment().contains(d.x));
    const LpResult u = lp_optimize(Polyhedron::nonnegative_orthant(1), Vec::Constant(1, 1.0));
    EXPECT_EQ(u.status, LpStatus::unbounded);
}

TEST(Lp, InfeasibleThrows) {
    Polyhedron P = Polyhedron::nonnegative_orthant(1).with_inequalities(
        Mat::Constant(1, 1, 1.0), Vec::Constant(1, -1.0));
    EXPECT_THROW(lp_optimize(P, Vec::Constant(1, 1.0)), InfeasibleError);
}

TEST(Lp, MatchesVertexEnumeration) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 3;
        const Polyhedron P = random_polytope(rng, n, 3);
        const Vec c = random_vec(rng, n, 1);
        const LpResult r = lp_optimize(P, c);
        ASSERT_EQ(r.status, LpStatus::optimal);
        double best = -kInf;
        for (const Vec &v : enumerate_vertices(P))
            best = std::max(best, c.dot(v));
        EXPECT_NEAR(r.value, best, 1e-9 * (1 + std::abs(best)));
        EXPECT_TRUE(P.contains(r.x, 1e-9));
    }
}

TEST(Qp, GeneralHessianKkt) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        Mat B(n, n);
        for (int j = 0; j < n; ++j)
            B.col(j) = random_vec(rng, n, 1);
        const Mat H = B * B.transpose() + 0.1 * Mat::Identity(n, n);
        const Vec f = random_vec(rng, n, 3);
        const Polyhedron P = random_polytope(rng, n, 4);
        const QpResult r = qp_solve(H, f, P);
        EXPECT_LE(qp_kkt_residual(H, f, P, r), 1e-9);
    }
}
