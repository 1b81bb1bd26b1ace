#pragma once

#include <cstdint>

#include "alm/convex.hpp"

namespace alm::detail {

/// Whether z + d stays in P, with directional tests on rows active at z.
bool step_feasible(const Polyhedron &P, const Vec &z, const Vec &d);

/// {(v, lambda, mu) : v - offset = A_I' lambda + E' mu, lambda >= 0}.
Polyhedron normal_cone_lifted(const Polyhedron &P, const Vec &z, const Vec &offset);

/// Magnitude of subgradients at z, used to bound sampling boxes.
double subgradient_scale(const ConvexFunction &h, const Vec &z);

struct CplqProx {
    Vec point;
    double value; // g at point
};

Cplq validate_cplq(std::vector<CplqPiece> pieces, std::uint64_t seed);
std::vector<int> cplq_active_pieces(const Cplq &c, const Vec &z);
double cplq_piece_value(const CplqPiece &p, const Vec &z);
double cplq_value(const Cplq &c, const Vec &z);
double cplq_increment(const Cplq &c, const Vec &z, const Vec &d);
CplqProx cplq_prox(const Cplq &c, double r, const Vec &y);
Polyhedron cplq_subdifferential(const Cplq &c, const Vec &z);
double cplq_subderivative(const Cplq &c, const Vec &z, const Vec &w);
double cplq_second_subderivative(const Cplq &c, const Vec &z, const Vec &v, const Vec &w);
std::vector<ConeRep> cplq_critical_cone(const Cplq &c, const Vec &z, const Vec &v);

} // namespace alm::detail
