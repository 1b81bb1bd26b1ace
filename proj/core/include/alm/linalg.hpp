#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace alm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Throws InputError unless v has the expected length.
void require_dim(const Vec &v, Eigen::Index n, const char *what);

/// Stacks two matrices vertically; either may have zero rows.
Mat vstack(const Mat &top, const Mat &bottom);
Vec vcat(const Vec &top, const Vec &bottom);

/// Symmetric-matrix encoding used by the PSD cone: row-major upper
/// triangle, off-diagonal entries scaled by sqrt(2).
Vec svec(const Mat &S);
Mat smat(const Vec &s, int order);
int svec_order(Eigen::Index len); // -1 if len is not d(d+1)/2

} // namespace alm
