#include "alm/cone_sampling.hpp"

#include <random>

#include "alm/errors.hpp"
#include "alm/lp.hpp"

namespace alm {

namespace {

const Polyhedron &halfspace_of(const ConeRep &K, const char *what) {
    if (K.form != ConeForm::halfspace)
        throw CapabilityError(std::string(what) + ": cone must be in halfspace form");
    return K.halfspace;
}

} // namespace

ConeRep cone_pullback(const ConeRep &K, const Mat &J) {
    const Polyhedron &P = halfspace_of(K, "cone_pullback");
    if (J.rows() != K.dim)
        throw InputError("cone_pullback: J has the wrong number of rows");
    const Eigen::Index n = J.cols();
    Mat A = P.n_ineq() ? Mat(P.A * J) : Mat(0, n);
    Mat E = P.n_eq() ? Mat(P.E * J) : Mat(0, n);
    return ConeRep::from_halfspace(Polyhedron(A, Vec::Zero(A.rows()), E, Vec::Zero(E.rows())));
}

ConeRep cone_intersection(const ConeRep &a, const ConeRep &b) {
    const Polyhedron &P = halfspace_of(a, "cone_intersection");
    const Polyhedron &Q = halfspace_of(b, "cone_intersection");
    if (a.dim != b.dim)
        throw InputError("cone_intersection: dimensions differ");
    return ConeRep::from_halfspace(P.with_inequalities(Q.A, Q.b).with_equalities(Q.E, Q.d));
}

std::vector<Vec> sample_cone(const ConeRep &K, int count, std::uint64_t seed) {
    if (count < 0)
        throw InputError("sample_cone: count must be nonnegative");
    const int n = K.dim;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vec> gens;
    auto add = [&](const Vec &w) {
        const double nw = w.norm();
        if (!(nw > 1e-9))
            return;
        const Vec u = w / nw;
        for (const Vec &g : gens)
            if ((g - u).norm() <= 1e-9)
                return;
        gens.push_back(u);
    };

    if (K.form == ConeForm::generators) {
        for (const Vec &g : K.generators)
            add(g);
    } else {
        const Polyhedron boxed =
            K.halfspace.with_inequalities(vstack(Mat::Identity(n, n), -Mat::Identity(n, n)), Vec::Ones(2 * n));
        auto probe = [&](const Polyhedron &P, const Vec &c) {
            const LpResult r = lp_optimize(P, c);
            if (r.status == LpStatus::optimal)
                add(r.x);
        };
        for (int j = 0; j < n; ++j) {
            probe(boxed, Vec::Unit(n, j));
            probe(boxed, -Vec::Unit(n, j));
        }
        // One point on each facet.
        for (int i = 0; i < K.halfspace.n_ineq(); ++i) {
            Vec c(n);
            for (int q = 0; q < n; ++q)
                c(q) = normal(rng);
            probe(boxed.with_equalities(K.halfspace.A.row(i), Vec::Zero(1)), c);
        }
    }
    if (gens.empty())
        return {};

    std::vector<Vec> out(gens.begin(), gens.begin() + std::min<std::ptrdiff_t>(count, std::ssize(gens)));
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    const size_t max_k = std::min<size_t>(gens.size(), static_cast<size_t>(n) + 1);
    std::uniform_int_distribution<size_t> how_many(std::min<size_t>(2, max_k), max_k);
    for (int attempt = 0; std::ssize(out) < count && attempt < 50 * count; ++attempt) {
        const size_t k = how_many(rng);
        Vec w = Vec::Zero(n);
        for (size_t q = 0; q < k; ++q)
            w += gamma(rng) * gens[pick(rng)];
        const double nw = w.norm();
        if (!(nw > 1e-9))
            continue;
        w /= nw;
        if (K.contains(w, 1e-9))
            out.push_back(w);
    }
    return out;
}

std::vector<Vec> sample_cone_union(const std::vector<ConeRep> &Ks, int count, std::uint64_t seed) {
    std::vector<Vec> out;
    if (Ks.empty())
        return out;
    const int each = (count + static_cast<int>(Ks.size()) - 1) / static_cast<int>(Ks.size());
    for (size_t i = 0; i < Ks.size(); ++i)
        for (Vec &w : sample_cone(Ks[i], each, seed + 0x9e3779b97f4a7c15ULL * (i + 1)))
            out.push_back(std::move(w));
    return out;
}

} // namespace alm
