#include "alm/linalg.hpp"

#include <cmath>

#include "alm/errors.hpp"

namespace alm {

void require_dim(const Vec &v, Eigen::Index n, const char *what) {
    if (v.size() != n)
        throw InputError(std::string(what) + ": expected length " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
}

Mat vstack(const Mat &top, const Mat &bottom) {
    const Eigen::Index cols = top.rows() > 0 ? top.cols() : bottom.cols();
    Mat out(top.rows() + bottom.rows(), cols);
    if (top.rows() > 0)
        out.topRows(top.rows()) = top;
    if (bottom.rows() > 0)
        out.bottomRows(bottom.rows()) = bottom;
    return out;
}

Vec vcat(const Vec &top, const Vec &bottom) {
    Vec out(top.size() + bottom.size());
    out << top, bottom;
    return out;
}

int svec_order(Eigen::Index len) {
    int d = 0;
    while (d * (d + 1) / 2 < len)
        ++d;
    return d * (d + 1) / 2 == len ? d : -1;
}

Vec svec(const Mat &S) {
    const Eigen::Index d = S.rows();
    Vec s(d * (d + 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j)
            s(k++) = i == j ? S(i, i) : std::sqrt(2.0) * S(i, j);
    return s;
}

Mat smat(const Vec &s, int order) {
    if (svec_order(s.size()) != order)
        throw InputError("smat: length does not match matrix order");
    Mat S(order, order);
    Eigen::Index k = 0;
    for (int i = 0; i < order; ++i)
        for (int j = i; j < order; ++j) {
            const double v = s(k++);
            if (i == j) {
                S(i, i) = v;
            } else {
                S(i, j) = v / std::sqrt(2.0);
                S(j, i) = S(i, j);
            }
        }
    return S;
}

} // namespace alm
