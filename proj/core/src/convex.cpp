#include "alm/convex.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "alm/decomposable.hpp"
#include "alm/errors.hpp"
#include "alm/lp.hpp"
#include "convex_detail.hpp"

namespace alm {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kActive = 1e-9;

Polyhedron box_polyhedron(const BoxIndicator &b) { return Polyhedron::box(b.lo, b.hi); }

bool soc_member(const Vec &z, double tol) {
    if (z.size() == 0)
        return true;
    return z.tail(z.size() - 1).norm() <= z(0) + tol * (1.0 + z.norm());
}

Vec soc_project(const Vec &y) {
    const Eigen::Index m = y.size();
    if (m == 0)
        return y;
    const double u0 = y(0);
    const double nr = y.tail(m - 1).norm();
    if (nr <= u0)
        return y;
    if (nr <= -u0)
        return Vec::Zero(m);
    const double c = 0.5 * (u0 + nr);
    Vec p(m);
    p(0) = c;
    p.tail(m - 1) = (c / nr) * y.tail(m - 1);
    return p;
}

Vec psd_project(const Vec &y, int order) {
    const Mat S = smat(y, order);
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    const Vec lam = es.eigenvalues().cwiseMax(0.0);
    return svec(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

double psd_min_eig(const Vec &z, int order) {
    if (order == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(smat(z, order), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool psd_member(const Vec &z, int order, double tol) {
    return psd_min_eig(z, order) >= -tol * (1.0 + z.norm());
}

// Orthonormal basis of the numerical kernel of smat(z) and the rest.
struct PsdSplit {
    Mat kernel;
    Mat range;
    Vec range_eigs;
};

PsdSplit psd_split(const Vec &z, int order) {
    Eigen::SelfAdjointEigenSolver<Mat> es(smat(z, order));
    const double tol = 1e-9 * (1.0 + z.norm());
    std::vector<int> k, r;
    for (int i = 0; i < order; ++i)
        (std::abs(es.eigenvalues()(i)) <= tol ? k : r).push_back(i);
    PsdSplit s;
    s.kernel.resize(order, static_cast<Eigen::Index>(k.size()));
    s.range.resize(order, static_cast<Eigen::Index>(r.size()));
    s.range_eigs.resize(static_cast<Eigen::Index>(r.size()));
    for (size_t i = 0; i < k.size(); ++i)
        s.kernel.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(k[i]);
    for (size_t i = 0; i < r.size(); ++i) {
        s.range.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(r[i]);
        s.range_eigs(static_cast<Eigen::Index>(i)) = es.eigenvalues()(r[i]);
    }
    return s;
}

void require_finite_at(const ConvexFunction &h, const Vec &z, const char *what) {
    require_dim(z, h.dim(), what);
    if (!std::isfinite(g_value(h, z)))
        throw InputError(std::string(what) + ": g is not finite at z");
}

double l1_subderivative(const L1Norm &l, const Vec &z, const Vec &w) {
    double s = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        s += z(i) > 0 ? w(i) : z(i) < 0 ? -w(i) : std::abs(w(i));
    return l.weight * s;
}

} // namespace

namespace detail {

bool step_feasible(const Polyhedron &P, const Vec &z, const Vec &d) {
    const double dn = d.norm();
    for (int i = 0; i < P.n_ineq(); ++i) {
        const double slack = P.b(i) - P.A.row(i).dot(z);
        const double ad = P.A.row(i).dot(d);
        if (std::abs(slack) <= P.row_tol(i, kActive)) {
            if (ad > 1e-14 * P.A.row(i).norm() * dn)
                return false;
        } else if (ad > slack + 1e-14 * (1.0 + std::abs(P.b(i)))) {
            return false;
        }
    }
    for (int i = 0; i < P.n_eq(); ++i)
        if (std::abs(P.E.row(i).dot(d)) > 1e-14 * P.E.row(i).norm() * dn)
            return false;
    return true;
}

} // namespace detail

ConvexFunction ConvexFunction::nonpositive_orthant(int dim) {
    if (dim < 0)
        throw InputError("nonpositive_orthant: negative dimension");
    return ConvexFunction(NonpositiveOrthant{dim}, dim);
}

ConvexFunction ConvexFunction::box(Vec lo, Vec hi) {
    require_dim(hi, lo.size(), "box");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (!(lo(i) <= hi(i)))
            throw InputError("box: lo > hi");
    const int n = static_cast<int>(lo.size());
    return ConvexFunction(BoxIndicator{std::move(lo), std::move(hi)}, n);
}

ConvexFunction ConvexFunction::polyhedron(Polyhedron P) {
    feasible_point(P); // throws when empty
    const int n = P.dim;
    return ConvexFunction(PolyhedronIndicator{std::move(P)}, n);
}

ConvexFunction ConvexFunction::l1(int dim, double weight) {
    if (!(weight > 0))
        throw InputError("l1: weight must be positive");
    return ConvexFunction(L1Norm{dim, weight}, dim);
}

ConvexFunction ConvexFunction::second_order_cone(int dim) {
    if (dim < 1)
        throw InputError("second_order_cone: dimension must be positive");
    return ConvexFunction(SecondOrderCone{dim}, dim);
}

ConvexFunction ConvexFunction::psd_cone(int order) {
    if (order < 1)
        throw InputError("psd_cone: order must be positive");
    return ConvexFunction(PsdCone{order}, order * (order + 1) / 2);
}

ConvexFunction ConvexFunction::cplq(std::vector<CplqPiece> pieces, std::uint64_t seed) {
    const Cplq c = detail::validate_cplq(std::move(pieces), seed);
    const int n = c.dim;
    return ConvexFunction(c, n);
}

std::string ConvexFunction::name() const {
    return std::visit(overloaded{
                          [](const NonpositiveOrthant &) { return std::string("nonpositive_orthant"); },
                          [](const BoxIndicator &) { return std::string("box"); },
                          [](const PolyhedronIndicator &) { return std::string("polyhedron"); },
                          [](const L1Norm &) { return std::string("l1"); },
                          [](const Cplq &) { return std::string("cplq"); },
                          [](const SecondOrderCone &) { return std::string("second_order_cone"); },
                          [](const PsdCone &) { return std::string("psd_cone"); },
                      },
                      v_);
}

bool ConvexFunction::is_indicator() const {
    return !std::holds_alternative<L1Norm>(v_) && !std::holds_alternative<Cplq>(v_);
}

bool ConvexFunction::is_polyhedral() const {
    return std::holds_alternative<NonpositiveOrthant>(v_) || std::holds_alternative<BoxIndicator>(v_) ||
           std::holds_alternative<PolyhedronIndicator>(v_) || std::holds_alternative<L1Norm>(v_);
}

bool ConvexFunction::has_polyhedral_subdifferential() const {
    return is_polyhedral() || std::holds_alternative<Cplq>(v_);
}

double g_value(const ConvexFunction &h, const Vec &z) {
    require_dim(z, h.dim(), "g_value");
    return std::visit(
        overloaded{
            [&](const NonpositiveOrthant &) { return (z.array() <= 0).all() ? 0.0 : kInf; },
            [&](const BoxIndicator &b) {
                return ((z.array() >= b.lo.array()) && (z.array() <= b.hi.array())).all() ? 0.0 : kInf;
            },
            [&](const PolyhedronIndicator &p) { return p.set.contains(z, 1e-12) ? 0.0 : kInf; },
            [&](const L1Norm &l) { return l.weight * z.lpNorm<1>(); },
            [&](const Cplq &c) { return detail::cplq_value(c, z); },
            [&](const SecondOrderCone &) { return soc_member(z, 1e-12) ? 0.0 : kInf; },
            [&](const PsdCone &p) { return psd_member(z, p.order, 1e-12) ? 0.0 : kInf; },
        },
        h.variant());
}

double g_increment(const ConvexFunction &h, const Vec &z, const Vec &d) {
    require_dim(z, h.dim(), "g_increment");
    require_dim(d, h.dim(), "g_increment");
    return std::visit(
        overloaded{
            [&](const NonpositiveOrthant &o) {
                return detail::step_feasible(Polyhedron::nonpositive_orthant(o.dim), z, d) ? 0.0 : kInf;
            },
            [&](const BoxIndicator &b) {
                return detail::step_feasible(box_polyhedron(b), z, d) ? 0.0 : kInf;
            },
            [&](const PolyhedronIndicator &p) {
                return detail::step_feasible(p.set, z, d) ? 0.0 : kInf;
            },
            [&](const L1Norm &l) {
                double s = 0;
                for (Eigen::Index i = 0; i < z.size(); ++i) {
                    const double zn = z(i) + d(i);
                    if (z(i) > 0 && zn >= 0)
                        s += d(i);
                    else if (z(i) < 0 && zn <= 0)
                        s -= d(i);
                    else
                        s += std::abs(zn) - std::abs(z(i));
                }
                return l.weight * s;
            },
            [&](const Cplq &c) { return detail::cplq_increment(c, z, d); },
            [&](const SecondOrderCone &) {
                const Eigen::Index m = z.size();
                const double nr = z.tail(m - 1).norm();
                const double scale = 1e-10 * (1.0 + z.norm());
                if (nr <= scale && std::abs(z(0)) <= scale) // apex
                    return soc_member(d, 0.0) ? 0.0 : kInf;
                if (nr < z(0) - scale)
                    return soc_member(z + d, 0.0) ? 0.0 : kInf;
                // Boundary: ||z_r + d_r|| - ||z_r|| - d_0 with z_0 snapped to ||z_r||.
                const Vec zr = z.tail(m - 1), dr = d.tail(m - 1);
                const double num = 2 * zr.dot(dr) + dr.squaredNorm();
                const double xi = num / ((zr + dr).norm() + nr) - d(0);
                return xi <= 0 ? 0.0 : kInf;
            },
            [&](const PsdCone &p) {
                return psd_min_eig(z + d, p.order) >= -1e-13 * (1.0 + z.norm()) ? 0.0 : kInf;
            },
        },
        h.variant());
}

Vec prox(const ConvexFunction &h, double r, const Vec &y) {
    if (!(r > 0))
        throw InputError("prox: r must be positive");
    require_dim(y, h.dim(), "prox");
    return std::visit(overloaded{
                          [&](const NonpositiveOrthant &) -> Vec { return y.cwiseMin(0.0); },
                          [&](const BoxIndicator &b) -> Vec { return y.cwiseMax(b.lo).cwiseMin(b.hi); },
                          [&](const PolyhedronIndicator &p) -> Vec { return project(p.set, y); },
                          [&](const L1Norm &l) -> Vec {
                              const double k = r * l.weight;
                              Vec p(y.size());
                              for (Eigen::Index i = 0; i < y.size(); ++i)
                                  p(i) = y(i) > k ? y(i) - k : y(i) < -k ? y(i) + k : 0.0;
                              return p;
                          },
                          [&](const Cplq &c) -> Vec { return detail::cplq_prox(c, r, y).point; },
                          [&](const SecondOrderCone &) -> Vec { return soc_project(y); },
                          [&](const PsdCone &p) -> Vec { return psd_project(y, p.order); },
                      },
                      h.variant());
}

ProxEval prox_eval(const ConvexFunction &h, double r, const Vec &y) {
    if (const auto *c = std::get_if<Cplq>(&h.variant())) {
        if (!(r > 0))
            throw InputError("prox: r must be positive");
        require_dim(y, h.dim(), "prox");
        detail::CplqProx p = detail::cplq_prox(*c, r, y);
        return {std::move(p.point), p.value};
    }
    Vec p = prox(h, r, y);
    const double v = h.is_indicator() ? 0.0 : g_value(h, p);
    return {std::move(p), v};
}

double moreau_value(const ConvexFunction &h, double r, const Vec &y) {
    const ProxEval p = prox_eval(h, r, y);
    return p.value + (y - p.point).squaredNorm() / (2 * r);
}

Vec moreau_grad(const ConvexFunction &h, double r, const Vec &y) { return (y - prox(h, r, y)) / r; }

bool subdiff_contains(const ConvexFunction &h, const Vec &z, const Vec &v, double tol) {
    require_dim(z, h.dim(), "subdiff_contains");
    require_dim(v, h.dim(), "subdiff_contains");
    return (prox(h, 1.0, z + v) - z).norm() <= tol;
}

Polyhedron subdifferential_lifted(const ConvexFunction &h, const Vec &z) {
    require_finite_at(h, z, "subdifferential_lifted");
    const int m = h.dim();
    // Builds a polyhedron in v only from per-coordinate sign/bound rules.
    auto coordinate_rules = [m](auto rule) {
        std::vector<std::pair<Eigen::Index, double>> ub, lb; // v_i <= c, v_i >= c
        std::vector<std::pair<Eigen::Index, double>> eq;
        for (Eigen::Index i = 0; i < m; ++i)
            rule(i, ub, lb, eq);
        Mat A = Mat::Zero(static_cast<Eigen::Index>(ub.size() + lb.size()), m);
        Vec b(A.rows());
        Eigen::Index k = 0;
        for (auto [i, c] : ub) {
            A(k, i) = 1;
            b(k++) = c;
        }
        for (auto [i, c] : lb) {
            A(k, i) = -1;
            b(k++) = -c;
        }
        Mat E = Mat::Zero(static_cast<Eigen::Index>(eq.size()), m);
        Vec d(E.rows());
        for (size_t j = 0; j < eq.size(); ++j) {
            E(static_cast<Eigen::Index>(j), eq[j].first) = 1;
            d(static_cast<Eigen::Index>(j)) = eq[j].second;
        }
        return Polyhedron(A, b, E, d);
    };
    using Rows = std::vector<std::pair<Eigen::Index, double>>;
    return std::visit(
        overloaded{
            [&](const NonpositiveOrthant &) {
                return coordinate_rules([&](Eigen::Index i, Rows &, Rows &lb, Rows &eq) {
                    if (std::abs(z(i)) <= kActive)
                        lb.emplace_back(i, 0.0);
                    else
                        eq.emplace_back(i, 0.0);
                });
            },
            [&](const BoxIndicator &bx) {
                return coordinate_rules([&](Eigen::Index i, Rows &ub, Rows &lb, Rows &eq) {
                    const bool at_hi = std::isfinite(bx.hi(i)) && std::abs(z(i) - bx.hi(i)) <= kActive * (1 + std::abs(bx.hi(i)));
                    const bool at_lo = std::isfinite(bx.lo(i)) && std::abs(z(i) - bx.lo(i)) <= kActive * (1 + std::abs(bx.lo(i)));
                    if (at_hi && at_lo)
                        return;
                    if (at_hi)
                        lb.emplace_back(i, 0.0);
                    else if (at_lo)
                        ub.emplace_back(i, 0.0);
                    else
                        eq.emplace_back(i, 0.0);
                });
            },
            [&](const PolyhedronIndicator &p) { return detail::normal_cone_lifted(p.set, z, Vec::Zero(m)); },
            [&](const L1Norm &l) {
                return coordinate_rules([&](Eigen::Index i, Rows &ub, Rows &lb, Rows &eq) {
                    if (z(i) > kActive)
                        eq.emplace_back(i, l.weight);
                    else if (z(i) < -kActive)
                        eq.emplace_back(i, -l.weight);
                    else {
                        ub.emplace_back(i, l.weight);
                        lb.emplace_back(i, -l.weight);
                    }
                });
            },
            [&](const Cplq &c) { return detail::cplq_subdifferential(c, z); },
            [&](const SecondOrderCone &) -> Polyhedron {
                throw CapabilityError("subdifferential_lifted: second-order cone is not polyhedral");
            },
            [&](const PsdCone &) -> Polyhedron {
                throw CapabilityError("subdifferential_lifted: PSD cone is not polyhedral");
            },
        },
        h.variant());
}

std::vector<Vec> subdiff_sample(const ConvexFunction &h, const Vec &z, int count, std::uint64_t seed,
                                const SubgradientBall *ball) {
    if (!h.has_polyhedral_subdifferential())
        throw CapabilityError("subdiff_sample: subdifferential of " + h.name() + " is not polyhedral");
    if (count < 1)
        throw InputError("subdiff_sample: count must be positive");
    const int m = h.dim();
    if (m == 0)
        return std::vector<Vec>(static_cast<size_t>(count), Vec(0));
    Polyhedron L = subdifferential_lifted(h, z);
    const int nl = L.dim;

    // Bounding box on the v coordinates.
    Vec center = Vec::Zero(m);
    double half;
    if (ball != nullptr) {
        require_dim(ball->center, m, "subdiff_sample");
        center = ball->center;
        half = ball->radius / std::sqrt(std::max(1, m));
    } else {
        half = 10.0 + 2.0 * detail::subgradient_scale(h, z);
    }
    Mat Ab = Mat::Zero(2 * m, nl);
    Vec bb(2 * m);
    for (int i = 0; i < m; ++i) {
        Ab(2 * i, i) = 1;
        bb(2 * i) = center(i) + half;
        Ab(2 * i + 1, i) = -1;
        bb(2 * i + 1) = half - center(i);
    }
    L = L.with_inequalities(Ab, bb);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vec> verts;
    auto add_vertex = [&](const Vec &x) {
        const Vec v = x.head(m);
        for (const Vec &u : verts)
            if ((u - v).norm() <= 1e-12 * (1.0 + v.norm()))
                return;
        verts.push_back(v);
    };
    try {
        for (int probe = 0; probe < count; ++probe) {
            Vec c = Vec::Zero(nl);
            if (probe < 2 * m) {
                c(probe / 2) = probe % 2 == 0 ? 1.0 : -1.0;
            } else {
                for (int i = 0; i < m; ++i)
                    c(i) = normal(rng);
            }
            add_vertex(lp_optimize(L, c).x);
        }
    } catch (const InfeasibleError &) {
        throw ContractError("subdiff_sample: no subgradient in the requested region");
    }

    std::vector<Vec> out = verts;
    std::gamma_distribution<double> gamma(1.0, 1.0);
    while (static_cast<int>(out.size()) < count) {
        Vec v = Vec::Zero(m);
        double total = 0;
        for (const Vec &u : verts) {
            const double a = gamma(rng);
            v += a * u;
            total += a;
        }
        out.push_back(v / total);
    }
    return out;
}

double subderivative_value(const ConvexFunction &h, const Vec &z, const Vec &w) {
    require_finite_at(h, z, "subderivative_value");
    require_dim(w, h.dim(), "subderivative_value");
    const double tol = 1e-12 * std::max(1.0, w.norm());
    return std::visit(
        overloaded{
            [&](const NonpositiveOrthant &o) {
                return tangent_cone(Polyhedron::nonpositive_orthant(o.dim), z).contains(w, 1e-12) ? 0.0 : kInf;
            },
            [&](const BoxIndicator &b) {
                return tangent_cone(box_polyhedron(b), z).contains(w, 1e-12) ? 0.0 : kInf;
            },
            [&](const PolyhedronIndicator &p) {
                return tangent_cone(p.set, z, 1e-9).contains(w, 1e-12) ? 0.0 : kInf;
            },
            [&](const L1Norm &l) { return l1_subderivative(l, z, w); },
            [&](const Cplq &c) { return detail::cplq_subderivative(c, z, w); },
            [&](const SecondOrderCone &) {
                const Eigen::Index m = z.size();
                const double nr = z.tail(m - 1).norm();
                const double scale = 1e-10 * (1.0 + z.norm());
                if (nr <= scale && std::abs(z(0)) <= scale)
                    return soc_member(w, 1e-12) ? 0.0 : kInf;
                if (nr < z(0) - scale)
                    return 0.0;
                const double dxi = z.tail(m - 1).dot(w.tail(m - 1)) / nr - w(0);
                return dxi <= tol ? 0.0 : kInf;
            },
            [&](const PsdCone &p) {
                const PsdSplit s = psd_split(z, p.order);
                if (s.kernel.cols() == 0)
                    return 0.0;
                const Mat K = s.kernel.transpose() * smat(w, p.order) * s.kernel;
                Eigen::SelfAdjointEigenSolver<Mat> es(K, Eigen::EigenvaluesOnly);
                return es.eigenvalues()(0) >= -tol ? 0.0 : kInf;
            },
        },
        h.variant());
}

bool critical_cone_membership(const ConvexFunction &h, const Vec &z, const Vec &v, const Vec &w, double tol) {
    require_dim(v, h.dim(), "critical_cone_membership");
    const double dg = subderivative_value(h, z, w);
    if (!std::isfinite(dg))
        return false;
    return std::abs(v.dot(w) - dg) <= tol * std::max(1.0, w.norm());
}

double second_subderivative_exact(const ConvexFunction &h, const Vec &z, const Vec &v, const Vec &w) {
    require_dim(w, h.dim(), "second_subderivative_exact");
    require_finite_at(h, z, "second_subderivative_exact");
    if (std::holds_alternative<PsdCone>(h.variant()))
        throw CapabilityError("second_subderivative_exact: no exact formula for the PSD cone");
    if (std::holds_alternative<SecondOrderCone>(h.variant()))
        return decomposable_second_subderivative(soc_reduction(z), v, w);
    if (!subdiff_contains(h, z, v))
        throw ContractError("second_subderivative_exact: v is not a subgradient at z");
    if (const auto *c = std::get_if<Cplq>(&h.variant()))
        return detail::cplq_second_subderivative(*c, z, v, w);
    return critical_cone_membership(h, z, v, w, 1e-9) ? 0.0 : kInf;
}

std::vector<ConeRep> critical_cone(const ConvexFunction &h, const Vec &z, const Vec &v) {
    require_finite_at(h, z, "critical_cone");
    require_dim(v, h.dim(), "critical_cone");
    const int m = h.dim();
    return std::visit(
        overloaded{
            [&](const NonpositiveOrthant &o) -> std::vector<ConeRep> {
                return {critical_cone_set(Polyhedron::nonpositive_orthant(o.dim), z, v)};
            },
            [&](const BoxIndicator &b) -> std::vector<ConeRep> {
                return {critical_cone_set(box_polyhedron(b), z, v)};
            },
            [&](const PolyhedronIndicator &p) -> std::vector<ConeRep> {
                return {critical_cone_set(p.set, z, v)};
            },
            [&](const L1Norm &l) -> std::vector<ConeRep> {
                if (!subdiff_contains(h, z, v))
                    throw ContractError("critical_cone: v is not a subgradient at z");
                std::vector<int> zero_rows, up, down;
                for (int i = 0; i < m; ++i) {
                    if (std::abs(z(i)) > kActive)
                        continue;
                    if (v(i) >= l.weight - kMembershipTol)
                        up.push_back(i); // w_i >= 0
                    else if (v(i) <= -l.weight + kMembershipTol)
                        down.push_back(i); // w_i <= 0
                    else
                        zero_rows.push_back(i);
                }
                Mat A = Mat::Zero(static_cast<Eigen::Index>(up.size() + down.size()), m);
                Eigen::Index k = 0;
                for (int i : up)
                    A(k++, i) = -1;
                for (int i : down)
                    A(k++, i) = 1;
                Mat E = Mat::Zero(static_cast<Eigen::Index>(zero_rows.size()), m);
                for (size_t j = 0; j < zero_rows.size(); ++j)
                    E(static_cast<Eigen::Index>(j), zero_rows[j]) = 1;
                return {ConeRep::from_halfspace(Polyhedron(A, Vec::Zero(A.rows()), E, Vec::Zero(E.rows())))};
            },
            [&](const Cplq &c) { return detail::cplq_critical_cone(c, z, v); },
            [&](const SecondOrderCone &) { return decomposable_critical_cone(soc_reduction(z), v); },
            [&](const PsdCone &p) -> std::vector<ConeRep> {
                if (!subdiff_contains(h, z, v))
                    throw ContractError("critical_cone: v is not a normal at z");
                const PsdSplit s = psd_split(z, p.order);
                const Mat U = s.kernel;
                const Eigen::Index k = U.cols();
                if (k == 0)
                    return {ConeRep::whole_space(m)};
                // Strict complementarity: U'VU negative definite. Then the
                // critical cone is the subspace {W : U'WU = 0}.
                const Mat UVU = U.transpose() * smat(v, p.order) * U;
                Eigen::SelfAdjointEigenSolver<Mat> es(UVU, Eigen::EigenvaluesOnly);
                if (es.eigenvalues()(k - 1) > -1e-9 * (1.0 + v.norm()))
                    throw CapabilityError("critical_cone: PSD cone without strict complementarity is not polyhedral");
                Mat E(k * (k + 1) / 2, m);
                Eigen::Index row = 0;
                for (Eigen::Index a = 0; a < k; ++a)
                    for (Eigen::Index b = a; b < k; ++b) {
                        const Mat S = 0.5 * (U.col(a) * U.col(b).transpose() + U.col(b) * U.col(a).transpose());
                        E.row(row++) = svec(S).transpose();
                    }
                return {ConeRep::from_halfspace(Polyhedron(Mat(0, m), Vec(0), E, Vec::Zero(E.rows())))};
            },
        },
        h.variant());
}

} // namespace alm
