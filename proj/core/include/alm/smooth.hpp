#pragma once

#include <functional>
#include <optional>

#include "alm/linalg.hpp"

namespace alm {

struct SmoothFunction {
    std::function<double(const Vec &)> eval;
    std::function<Vec(const Vec &)> grad;
    std::function<Mat(const Vec &)> hess; // may be empty
};

struct SmoothMapping {
    int in_dim = 0;
    int out_dim = 0;
    std::function<Vec(const Vec &)> eval;
    std::function<Mat(const Vec &)> jacobian;
    /// (x, y, w) -> Hess<y, Phi>(x) w; may be empty.
    std::function<Vec(const Vec &, const Vec &, const Vec &)> second_directional;

    static SmoothMapping affine(const Mat &J, const Vec &c);
};

/// f(x) = 1/2 x'Qx + q'x + c0.
SmoothFunction quadratic_function(const Mat &Q, const Vec &q, double c0 = 0.0);

/// Central finite-difference step used by all derivative checks.
double fd_step(const Vec &x);

Vec fd_gradient(const std::function<double(const Vec &)> &f, const Vec &x);
Mat fd_jacobian(const std::function<Vec(const Vec &)> &F, const Vec &x, int out_dim);

/// Max relative error ||a - b|| / max(1, ||b||).
double rel_err(const Vec &a, const Vec &b);
double rel_err(const Mat &a, const Mat &b);

} // namespace alm
