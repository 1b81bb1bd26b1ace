#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "alm/errors.hpp"
#include "support/functions.hpp"

namespace almtest {

/// A CPLQ function with a point z where several pieces meet and a
/// subgradient v at z.
struct CplqInstance {
    ConvexFunction f;
    Vec z;
    Vec v;
    std::string family;
};

namespace detail {

inline std::vector<double> dirichlet(std::mt19937_64 &rng, size_t k, bool allow_zero) {
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::bernoulli_distribution drop(0.3);
    std::vector<double> w(k);
    double s = 0;
    for (size_t i = 0; i < k; ++i) {
        w[i] = (allow_zero && k > 1 && i > 0 && drop(rng)) ? 0.0 : gamma(rng);
        s += w[i];
    }
    for (double &x : w)
        x /= s;
    return w;
}

// 1/2 z'Qz + q'z + max_i (a_i'z + b_i), pieces where each affine term wins.
inline CplqInstance max_affine(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> dim(1, 4), npieces(2, 4);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    for (;;) {
        const int n = dim(rng), k = npieces(rng);
        std::uniform_int_distribution<int> nact(1, k);
        const int s = nact(rng);
        const Mat B = random_vec(rng, n * n, 1.0).reshaped(n, n);
        std::bernoulli_distribution flat(0.25);
        const Mat Q = flat(rng) ? Mat(Mat::Zero(n, n)) : Mat(B.transpose() * B / n);
        const Vec q = random_vec(rng, n, 1.0);
        const Vec z = random_vec(rng, n, 1.0);
        std::vector<Vec> a;
        std::vector<double> b;
        for (int i = 0; i < k; ++i) {
            a.push_back(random_vec(rng, n, 1.0));
            b.push_back(-a.back().dot(z) - (i < s ? 0.0 : unif(rng)));
        }
        std::vector<CplqPiece> pieces;
        for (int i = 0; i < k; ++i) {
            Mat A(k - 1, n);
            Vec rhs(k - 1);
            int r = 0;
            for (int j = 0; j < k; ++j) {
                if (j == i)
                    continue;
                A.row(r) = (a[static_cast<size_t>(j)] - a[static_cast<size_t>(i)]).transpose();
                rhs(r++) = b[static_cast<size_t>(i)] - b[static_cast<size_t>(j)];
            }
            pieces.push_back(CplqPiece{Polyhedron(A, rhs, Mat(0, n), Vec(0)), Q, q + a[static_cast<size_t>(i)],
                                       b[static_cast<size_t>(i)]});
        }
        try {
            ConvexFunction f = ConvexFunction::cplq(std::move(pieces));
            const std::vector<double> lam = dirichlet(rng, static_cast<size_t>(s), true);
            Vec v = Q * z + q;
            for (int i = 0; i < s; ++i)
                v += lam[static_cast<size_t>(i)] * a[static_cast<size_t>(i)];
            return {std::move(f), z, v, "max_affine"};
        } catch (const alm::InputError &) {
            // Dominated piece with an empty region; draw again.
        }
    }
}

// h(c'z) with h a convex piecewise quadratic in one variable.
inline CplqInstance ridge(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> dim(1, 4), npieces(2, 4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::bernoulli_distribution zero_curv(0.3), zero_jump(0.25);
    const int n = dim(rng), k = npieces(rng);
    Vec c = random_vec(rng, n, 1.0);
    c /= std::max(c.norm(), 1e-3);
    std::vector<double> bp;
    double p = -1.0 + unif(rng);
    for (int j = 0; j < k - 1; ++j, p += 0.3 + unif(rng))
        bp.push_back(p);
    std::vector<double> kap, beta, alpha;
    kap.push_back(zero_curv(rng) ? 0.0 : 2 * unif(rng));
    beta.push_back(2 * unif(rng) - 1);
    alpha.push_back(unif(rng));
    std::vector<double> jumps;
    for (int j = 0; j < k - 1; ++j) {
        const double s = bp[static_cast<size_t>(j)];
        const double kn = zero_curv(rng) ? 0.0 : 2 * unif(rng);
        const double jump = zero_jump(rng) ? 0.0 : 0.2 + unif(rng);
        const double slope = kap.back() * s + beta.back() + jump;
        const double val = 0.5 * kap.back() * s * s + beta.back() * s + alpha.back();
        const double bn = slope - kn * s;
        kap.push_back(kn);
        beta.push_back(bn);
        alpha.push_back(val - 0.5 * kn * s * s - bn * s);
        jumps.push_back(jump);
    }
    std::vector<CplqPiece> pieces;
    for (int j = 0; j < k; ++j) {
        std::vector<Vec> rows;
        std::vector<double> rhs;
        if (j > 0) { // c'z >= bp[j-1]
            rows.push_back(-c);
            rhs.push_back(-bp[static_cast<size_t>(j - 1)]);
        }
        if (j < k - 1) { // c'z <= bp[j]
            rows.push_back(c);
            rhs.push_back(bp[static_cast<size_t>(j)]);
        }
        Mat A(static_cast<Eigen::Index>(rows.size()), n);
        Vec bb(static_cast<Eigen::Index>(rows.size()));
        for (size_t r = 0; r < rows.size(); ++r) {
            A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
            bb(static_cast<Eigen::Index>(r)) = rhs[r];
        }
        const size_t u = static_cast<size_t>(j);
        pieces.push_back(CplqPiece{Polyhedron(A, bb, Mat(0, n), Vec(0)), kap[u] * c * c.transpose(), beta[u] * c, alpha[u]});
    }
    ConvexFunction f = ConvexFunction::cplq(std::move(pieces));
    // z on a breakpoint, shifted along the level set of c'z.
    std::uniform_int_distribution<int> pick(0, k - 2);
    const int j = pick(rng);
    const double s = bp[static_cast<size_t>(j)];
    Vec z = random_vec(rng, n, 1.0);
    z += (s - c.dot(z)) / c.squaredNorm() * c;
    const double lo = kap[static_cast<size_t>(j)] * s + beta[static_cast<size_t>(j)];
    const double hi = lo + jumps[static_cast<size_t>(j)];
    std::uniform_int_distribution<int> where(0, 2);
    const int w = where(rng);
    const double slope = w == 0 ? lo : w == 1 ? hi : lo + unif(rng) * (hi - lo);
    return {std::move(f), z, slope * c, "ridge"};
}

} // namespace detail

/// Alternates the two families; at most 4 pieces, dimension at most 4.
inline CplqInstance random_cplq_instance(std::mt19937_64 &rng, int index) {
    return index % 2 == 0 ? detail::max_affine(rng) : detail::ridge(rng);
}

} // namespace almtest
