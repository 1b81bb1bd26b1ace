#pragma once

#include "alm/linalg.hpp"

namespace alm {

struct NnlsResult {
    Vec coeffs;      // sign-constrained part, >= 0
    Vec free;        // unconstrained part
    double residual; // || G coeffs + F free - target ||
};

/// min || G c + F f - target || over c >= 0, f free. Lawson-Hanson on the
/// sign-constrained block after eliminating the free block by least squares.
/// Either matrix may have zero columns.
NnlsResult nnls_solve(const Mat &G, const Mat &F, const Vec &target);

} // namespace alm
