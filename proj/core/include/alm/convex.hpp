#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alm/polyhedron.hpp"

namespace alm {

struct NonpositiveOrthant {
    int dim;
};
struct BoxIndicator {
    Vec lo, hi;
};
struct PolyhedronIndicator {
    Polyhedron set;
};
struct L1Norm {
    int dim;
    double weight;
};
/// One piece 1/2 <A z, z> + <a, z> + alpha on a polyhedral region.
struct CplqPiece {
    Polyhedron region;
    Mat A;
    Vec a;
    double alpha = 0;
};
struct Cplq {
    std::vector<CplqPiece> pieces;
    int dim;
};
struct SecondOrderCone {
    int dim; // {(u0, ur) : ||ur|| <= u0}
};
struct PsdCone {
    int order; // vectors are svec encodings of length order(order+1)/2
};

class ConvexFunction {
public:
    using Variant = std::variant<NonpositiveOrthant, BoxIndicator, PolyhedronIndicator, L1Norm,
                                 Cplq, SecondOrderCone, PsdCone>;

    static ConvexFunction nonpositive_orthant(int dim);
    static ConvexFunction box(Vec lo, Vec hi);
    static ConvexFunction polyhedron(Polyhedron P);
    static ConvexFunction l1(int dim, double weight = 1.0);
    /// Validates piece curvature and agreement on sampled overlaps.
    static ConvexFunction cplq(std::vector<CplqPiece> pieces, std::uint64_t seed = 0);
    static ConvexFunction second_order_cone(int dim);
    static ConvexFunction psd_cone(int order);

    int dim() const { return dim_; }
    const Variant &variant() const { return v_; }
    std::string name() const;

    bool is_indicator() const;
    /// Epigraph polyhedral: orthant, box, polyhedron, l1.
    bool is_polyhedral() const;
    /// Polyhedral subdifferentials: polyhedral variants and CPLQ.
    bool has_polyhedral_subdifferential() const;

private:
    ConvexFunction(Variant v, int dim) : v_(std::move(v)), dim_(dim) {}
    Variant v_;
    int dim_;
};

inline constexpr double kMembershipTol = 1e-8;

double g_value(const ConvexFunction &h, const Vec &z);

/// g(z + d) - g(z), evaluated without forming the difference of two values
/// where the variant allows it.
double g_increment(const ConvexFunction &h, const Vec &z, const Vec &d);

Vec prox(const ConvexFunction &h, double r, const Vec &y);

/// The prox point together with g at that point (0 for indicators).
struct ProxEval {
    Vec point;
    double value;
};
ProxEval prox_eval(const ConvexFunction &h, double r, const Vec &y);

double moreau_value(const ConvexFunction &h, double r, const Vec &y);
Vec moreau_grad(const ConvexFunction &h, double r, const Vec &y);

bool subdiff_contains(const ConvexFunction &h, const Vec &z, const Vec &v,
                      double tol = kMembershipTol);

/// The subdifferential at z as the first dim() coordinates of a lifted
/// polyhedron (v, auxiliary multipliers). Polyhedral and CPLQ only.
Polyhedron subdifferential_lifted(const ConvexFunction &h, const Vec &z);

struct SubgradientBall {
    Vec center;
    double radius;
};

/// `count` points of the subdifferential at z: LP vertices for coordinate
/// and random objectives, then Dirichlet combinations of those vertices.
/// With a ball, samples are restricted to a box inscribed in it.
std::vector<Vec> subdiff_sample(const ConvexFunction &h, const Vec &z, int count,
                                std::uint64_t seed, const SubgradientBall *ball = nullptr);

double subderivative_value(const ConvexFunction &h, const Vec &z, const Vec &w);

double second_subderivative_exact(const ConvexFunction &h, const Vec &z, const Vec &v,
                                  const Vec &w);

bool critical_cone_membership(const ConvexFunction &h, const Vec &z, const Vec &v, const Vec &w,
                              double tol = kMembershipTol);

/// Critical cone at (z, v) as a finite union of polyhedral cones.
std::vector<ConeRep> critical_cone(const ConvexFunction &h, const Vec &z, const Vec &v);

} // namespace alm
