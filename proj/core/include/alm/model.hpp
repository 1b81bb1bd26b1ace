#pragma once

#include "alm/convex.hpp"
#include "alm/polyhedron.hpp"
#include "alm/smooth.hpp"

namespace alm {

/// minimize phi(x) + g(Phi(x)) subject to x in theta.
struct CompositeProblem {
    SmoothFunction phi;
    SmoothMapping Phi;
    ConvexFunction g;
    Polyhedron theta;
    int n;
    int m;

    /// Throws InputError when the pieces disagree on dimensions.
    void validate() const;
};

struct KnownSolution {
    Vec x_bar;
    Polyhedron multiplier_set;
    Vec reference_multiplier;
};

double lagrangian_value(const CompositeProblem &p, const Vec &x, const Vec &y);
Vec lagrangian_grad_x(const CompositeProblem &p, const Vec &x, const Vec &y);
/// Hess phi(x) + sum_j y_j Hess Phi_j(x), assembled column by column.
Mat lagrangian_hess_xx(const CompositeProblem &p, const Vec &x, const Vec &y);

} // namespace alm
