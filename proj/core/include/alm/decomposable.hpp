#pragma once

#include "alm/convex.hpp"
#include "alm/smooth.hpp"

namespace alm {

/// Local representation g(u) = g(base) + outer(inner(u)) near base, with
/// outer sublinear and inner(base) = 0.
struct DecomposableSpec {
    Vec base;
    ConvexFunction outer;
    SmoothMapping inner;
};

/// Checks ||inner(base)|| <= 1e-12 and outer(0) = 0.
void validate(const DecomposableSpec &spec);

/// Reduction of the second-order cone indicator at u: zero map in the
/// interior, u -> ||u_r|| - u_0 into R_- on the boundary away from the apex.
/// The apex has no reduction (CapabilityError); u outside the cone is an
/// InputError. The boundary base point is snapped onto the cone.
DecomposableSpec soc_reduction(const Vec &u);

/// Solves ybar = D inner(base)' mu and checks mu in d outer(0).
Vec reduction_multiplier(const DecomposableSpec &spec, const Vec &ybar);

/// Chain rule: <mu, D^2 inner(base)(w, w)> + d^2 outer(0, mu)(D inner(base) w).
double decomposable_second_subderivative(const DecomposableSpec &spec, const Vec &ybar,
                                         const Vec &w);

/// {w : D inner(base) w in K_outer(0, mu)} as a union of halfspace cones.
std::vector<ConeRep> decomposable_critical_cone(const DecomposableSpec &spec, const Vec &ybar);

} // namespace alm
