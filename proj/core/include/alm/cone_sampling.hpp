#pragma once

#include <cstdint>
#include <vector>

#include "alm/polyhedron.hpp"

namespace alm {

/// {w : J w in K} for a halfspace cone K.
ConeRep cone_pullback(const ConeRep &K, const Mat &J);

/// Intersection of two halfspace cones.
ConeRep cone_intersection(const ConeRep &a, const ConeRep &b);

/// Unit vectors of K: extreme directions found by LPs inside the unit box
/// (coordinate objectives and one random objective per facet), followed by
/// Dirichlet conic combinations that pass the membership test. Returns an
/// empty list when K = {0}.
std::vector<Vec> sample_cone(const ConeRep &K, int count, std::uint64_t seed);

/// Samples every cone of a union, `count` split evenly.
std::vector<Vec> sample_cone_union(const std::vector<ConeRep> &Ks, int count, std::uint64_t seed);

/// Uniform point of the Euclidean ball.
template <class Rng> Vec uniform_ball(Rng &rng, const Vec &center, double radius);

} // namespace alm

#include <cmath>
#include <random>

template <class Rng> alm::Vec alm::uniform_ball(Rng &rng, const Vec &center, double radius) {
    const Eigen::Index d = center.size();
    if (d == 0)
        return center;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec u(d);
    double n2 = 0;
    do {
        for (Eigen::Index i = 0; i < d; ++i)
            u(i) = normal(rng);
        n2 = u.squaredNorm();
    } while (n2 == 0);
    const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(d));
    return center + (r / std::sqrt(n2)) * u;
}
