#include "alm/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "alm/augmented.hpp"
#include "alm/errors.hpp"

namespace alm {

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        out(i++) = x;
    return out;
}

// 1/2 ||x - c||^2 with identity Hessian.
SmoothFunction distance_to(const Vec &c) {
    const Eigen::Index n = c.size();
    return quadratic_function(Mat::Identity(n, n), -c, 0.5 * c.squaredNorm());
}

CatalogProblem p1() {
    // phi = 1/2||x||^2 - x1, Phi = (x1, 2 x1), g = indicator of R^2_-.
    Mat J(2, 2);
    J << 1, 0, 2, 0;
    CompositeProblem prob{quadratic_function(Mat::Identity(2, 2), v({-1, 0})), SmoothMapping::affine(J, Vec::Zero(2)),
                          ConvexFunction::nonpositive_orthant(2), Polyhedron::whole_space(2), 2, 2};
    Mat A = -Mat::Identity(2, 2);
    Mat E(1, 2);
    E << 1, 2;
    KnownSolution sol{Vec::Zero(2), Polyhedron(A, Vec::Zero(2), E, v({1})), v({1, 0})};
    return {"P1",
            std::move(prob),
            std::move(sol),
            "Degenerate nonlinear program with a segment of multipliers {y >= 0 : y1 + 2 y2 = 1}. "
            "Polyhedral g, affine Phi, theta = R^2: the multiplier map is calm, the second-order "
            "sufficient condition holds with modulus 1, and the primal-dual ALM rate is Q-linear.",
            v({0.5, 0.5}),
            Vec::Zero(2),
            std::nullopt};
}

CatalogProblem p2() {
    // phi = 1/2||x - c||^2, Phi = (x1, x2 + x3, x2 + x3), g = l1, theta = [-1, 1]^3.
    Mat J(3, 3);
    J << 1, 0, 0, 0, 1, 1, 0, 1, 1;
    CompositeProblem prob{distance_to(v({2, 0.5, -0.3})), SmoothMapping::affine(J, Vec::Zero(3)),
                          ConvexFunction::l1(3), Polyhedron::box(Vec::Constant(3, -1), Vec::Constant(3, 1)), 3, 3};
    // M = {y1 = 1, y2 + y3 = 0.1, |y2| <= 1, |y3| <= 1}.
    Mat A(4, 3);
    A << 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    Mat E(2, 3);
    E << 1, 0, 0, 0, 1, 1;
    KnownSolution sol{v({1, 0.4, -0.4}), Polyhedron(A, Vec::Ones(4), E, v({1, 0.1})), v({1, 0.05, 0.05})};
    return {"P2",
            std::move(prob),
            std::move(sol),
            "CPLQ composite: l1 norm of a rank-deficient linear map over a box. The solution sits on "
            "a weakly active bound with a kink of g at Phi(x) = (1, 0, 0); multipliers form a segment.",
            Vec::Zero(3),
            Vec::Zero(3),
            l1_as_cplq(3)};
}

CatalogProblem p3() {
    // phi = 1/2||x - c||^2, Phi = x + e1, g = indicator of the second-order cone.
    CompositeProblem prob{distance_to(v({-1, 2, 0})), SmoothMapping::affine(Mat::Identity(3, 3), v({1, 0, 0})),
                          ConvexFunction::second_order_cone(3), Polyhedron::whole_space(3), 3, 3};
    const Vec ybar = v({-1, 1, 0});
    KnownSolution sol{v({0, 1, 0}), Polyhedron(Mat(0, 3), Vec(0), Mat::Identity(3, 3), ybar), ybar};
    return {"P3",
            std::move(prob),
            std::move(sol),
            "Second-order cone constraint active on the boundary away from the apex; unique multiplier. "
            "g is C2-cone reducible there, and its second subderivative carries the cone curvature term.",
            Vec::Zero(3),
            Vec::Zero(3),
            std::nullopt};
}

CatalogProblem p4() {
    // Nearest PSD matrix to [[1,2],[2,1]] in svec coordinates.
    Mat B(2, 2);
    B << 1, 2, 2, 1;
    Mat X(2, 2);
    X << 1.5, 1.5, 1.5, 1.5;
    const Vec ybar = svec(B - X);
    CompositeProblem prob{distance_to(svec(B)), SmoothMapping::affine(Mat::Identity(3, 3), Vec::Zero(3)),
                          ConvexFunction::psd_cone(2), Polyhedron::whole_space(3), 3, 3};
    KnownSolution sol{svec(X), Polyhedron(Mat(0, 3), Vec(0), Mat::Identity(3, 3), ybar), ybar};
    return {"P4",
            std::move(prob),
            std::move(sol),
            "Projection onto the 2x2 PSD cone; solution by eigenvalue clamping (rank one, strict "
            "complementarity). Unique multiplier.",
            Vec::Zero(3),
            Vec::Zero(3),
            std::nullopt};
}

} // namespace

ConvexFunction l1_as_cplq(int m, double weight) {
    if (m < 1 || m > 16)
        throw InputError("l1_as_cplq: dimension must be in [1, 16]");
    std::vector<CplqPiece> pieces;
    for (int mask = 0; mask < (1 << m); ++mask) {
        Vec sigma(m);
        for (int i = 0; i < m; ++i)
            sigma(i) = (mask >> i) & 1 ? -1.0 : 1.0;
        // sigma_i z_i >= 0
        Mat A = -Mat(sigma.asDiagonal());
        pieces.push_back({Polyhedron(A, Vec::Zero(m), Mat(0, m), Vec(0)), Mat::Zero(m, m), weight * sigma, 0.0});
    }
    return ConvexFunction::cplq(std::move(pieces));
}

std::vector<std::string> catalog_ids() { return {"P1", "P2", "P3", "P4"}; }

CatalogProblem catalog_problem(const std::string &id) {
    CatalogProblem c = [&] {
        if (id == "P1")
            return p1();
        if (id == "P2")
            return p2();
        if (id == "P3")
            return p3();
        if (id == "P4")
            return p4();
        throw InputError("unknown catalog problem '" + id + "'");
    }();
    c.problem.validate();
    if (catalog_solution_residual(c) > 1e-10)
        throw ContractError("catalog: declared solution of " + id + " has nonzero residual");
    return c;
}

double catalog_solution_residual(const CatalogProblem &c) {
    double worst = kkt_residual(c.problem, c.solution.x_bar, c.solution.reference_multiplier);
    for (const Vec &y : enumerate_vertices(c.solution.multiplier_set))
        worst = std::max(worst, kkt_residual(c.problem, c.solution.x_bar, y));
    return worst;
}

} // namespace alm
