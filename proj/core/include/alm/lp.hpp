#pragma once

#include "alm/polyhedron.hpp"

namespace alm {

enum class LpStatus { optimal, unbounded, degenerate_objective };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    Vec x;            // optimal basic solution, or last feasible point
    double value = 0; // c'x at x
    int pivots = 0;
};

/// max c'x over P by dense two-phase simplex with Bland's rule.
/// Throws InfeasibleError when P is empty.
LpResult lp_optimize(const Polyhedron &P, const Vec &c);

/// Some point of P (phase one only); throws InfeasibleError when empty.
Vec feasible_point(const Polyhedron &P);

} // namespace alm
