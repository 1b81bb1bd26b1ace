#pragma once

#include <vector>

#include "alm/linalg.hpp"

namespace alm {

/// {x : A x <= b, E x = d} in R^dim. Empty A and E is the whole space.
struct Polyhedron {
    Mat A;
    Vec b;
    Mat E;
    Vec d;
    int dim = 0;

    Polyhedron() = default;
    Polyhedron(Mat A, Vec b, Mat E, Vec d);

    static Polyhedron whole_space(int n);
    /// Bounds may be +-inf; infinite sides produce no row.
    static Polyhedron box(const Vec &lo, const Vec &hi);
    static Polyhedron nonnegative_orthant(int n);
    static Polyhedron nonpositive_orthant(int n);

    int n_ineq() const { return static_cast<int>(A.rows()); }
    int n_eq() const { return static_cast<int>(E.rows()); }

    /// Per-row activity tolerance scale * (1 + |b_i|).
    double row_tol(int i, double scale) const;
    double eq_tol(int i, double scale) const;

    bool contains(const Vec &x, double scale = 1e-9) const;
    std::vector<int> active_set(const Vec &x, double scale = 1e-9) const;

    Polyhedron with_equalities(const Mat &E2, const Vec &d2) const;
    Polyhedron with_inequalities(const Mat &A2, const Vec &b2) const;
};

inline constexpr double kDefaultActivity = 1e-9;

enum class ConeForm { generators, halfspace };

/// A closed convex cone given either by generators or by a homogeneous
/// halfspace system (b = 0, d = 0).
struct ConeRep {
    ConeForm form = ConeForm::halfspace;
    std::vector<Vec> generators;
    Polyhedron halfspace;
    int dim = 0;

    static ConeRep from_halfspace(Polyhedron P);
    static ConeRep from_generators(std::vector<Vec> gens, int dim);
    static ConeRep whole_space(int n);
    static ConeRep origin(int n);

    bool contains(const Vec &w, double tol = 1e-9) const;
};

/// Euclidean projection onto P; throws InfeasibleError if P is empty.
Vec project(const Polyhedron &P, const Vec &y);

/// dist(v, N_P(x)) with the active set taken at activity scale tol_act.
double normal_cone_distance(const Polyhedron &P, const Vec &x, const Vec &v,
                            double tol_act = kDefaultActivity);

ConeRep tangent_cone(const Polyhedron &P, const Vec &x, double tol_act = kDefaultActivity);

/// T_P(x) intersected with v-perp; v must be a normal at x within tol.
ConeRep critical_cone_set(const Polyhedron &P, const Vec &x, const Vec &v,
                          double tol = 1e-8);

double dist_to_polyhedron(const Polyhedron &P, const Vec &y);

/// Vertices of a bounded polyhedron of small dimension, by enumerating
/// active row subsets. Intended for multiplier sets in tests and checks.
std::vector<Vec> enumerate_vertices(const Polyhedron &P, double tol = 1e-9);

} // namespace alm
