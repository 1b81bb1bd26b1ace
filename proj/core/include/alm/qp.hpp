#pragma once

#include "alm/polyhedron.hpp"

namespace alm {

struct QpResult {
    Vec x;
    Vec lambda; // multipliers of A rows (zero off the working set)
    Vec mu;     // multipliers of E rows
    double objective = 0;
    int iterations = 0;
};

/// min 1/2 x'Hx + f'x over P, H symmetric positive definite.
/// Primal active-set method started from a phase-one point (or x0 when
/// supplied and feasible). Throws NumericalError past 50*dim iterations.
QpResult qp_solve(const Mat &H, const Vec &f, const Polyhedron &P, const Vec *x0 = nullptr);

/// Max violation of the KKT system of the QP at (x, lambda, mu).
double qp_kkt_residual(const Mat &H, const Vec &f, const Polyhedron &P, const QpResult &r);

} // namespace alm
