#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "alm/augmented.hpp"
#include "alm/convex.hpp"

namespace alm {

struct QuotientGrid {
    double t0 = 1e-1;
    double theta = 0.5;
    int levels = 20;
    double dir_radius = 0.5; // perturbation radius at level t is dir_radius * t
    int samples_per_level = 16;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Verdict { none, pass, fail, inconclusive, vacuous };
std::string to_string(Verdict v);

struct LevelStat {
    double t;
    double min;
    int samples;
};

struct DiagnosticsReport {
    std::string check;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    bool unbounded = false;
    std::vector<LevelStat> levels;
    bool stabilized = false; // last three level minima agree within 1e-6
    int samples = 0;
    int excluded = 0;
    Verdict verdict = Verdict::none;
    std::map<std::string, double> metrics;
    Vec witness;
    std::uint64_t seed = 0;
    std::vector<std::string> notes;
};

/// (f(x + t w) - f(x) - t <v, w>) / (t^2 / 2), with the increment taken from
/// g_increment. +inf off the domain.
double second_order_quotient(const ConvexFunction &f, const Vec &x, const Vec &v, double t, const Vec &w);

/// Smallest quotient per level over w itself and random w' in B(w, dir_radius t).
/// Curved indicators (second-order and PSD cones) also get a convex
/// refinement of the ball minimum and skip levels below the resolution floor
/// t >= eps^(1/3) (1 + ||x||). The estimate is the finest level's minimum,
/// flagged unbounded when it exceeds 1/t there.
DiagnosticsReport second_subderivative_estimate(const ConvexFunction &f, const Vec &x, const Vec &v, const Vec &w,
                                                const QuotientGrid &grid = {});

/// As above with v' ranging over v and subdiff_sample points of B(v, dir_radius t).
/// Polyhedral subdifferentials only (CapabilityError otherwise).
DiagnosticsReport semi_strict_ssd_estimate(const ConvexFunction &f, const Vec &x, const Vec &v, const Vec &w,
                                           const QuotientGrid &grid = {}, int subgrad_samples = 8);

/// Compares both estimates over sampled unit directions of the critical cone.
DiagnosticsReport semi_stability_check(const ConvexFunction &f, const Vec &x, const Vec &v, int cone_samples = 16,
                                       const QuotientGrid &grid = {});

/// Minimum of <Hess_xx L w, w> + d2g(Phi(x), y)(J w) over unit w of the
/// critical direction set. Vacuous when that set is {0}.
DiagnosticsReport sosc_check(const CompositeProblem &p, const KnownSolution &sol, const Vec &y,
                             int sphere_samples = 256, std::uint64_t seed = 0);

/// Worst growth ratio 2 (L(x, y, rho) - L(x_bar, y, rho)) / ||x - x_bar||^2
/// over x in theta near x_bar, y in M near y_bar and rho in rho_list.
DiagnosticsReport uqgc_check(const CompositeProblem &p, const KnownSolution &sol, double gamma,
                             const std::vector<double> &rho_list, int sample_count, double kappa_target,
                             std::uint64_t seed = 0);

enum class ErrorBoundSampling {
    ball,           // (x, y) in the product ball, x projected to theta
    multiplier_set, // x = x_bar, y in M near y_bar
};

/// Largest (||x - x_bar|| + dist(y, M)) / r(x, y) over samples with r > 1e-12.
DiagnosticsReport error_bound_estimate(const CompositeProblem &p, const KnownSolution &sol, double radius,
                                       int sample_count, std::uint64_t seed = 0,
                                       ErrorBoundSampling mode = ErrorBoundSampling::ball);

/// The exact closed-form infimum on the right-hand side of the augmented
/// quotient identity at (t, w).
double aug_quotient_rhs_infimum(const CompositeProblem &p, const KnownSolution &sol, double rho, double t,
                                const Vec &w);

/// Second-order quotient of x -> L(x, y_bar, rho) at x_bar against the sum of
/// the quotients of phi, <y_bar, Phi> and the infimum term.
DiagnosticsReport aug_quotient_identity_check(const CompositeProblem &p, const KnownSolution &sol, double rho,
                                              const std::vector<double> &t_list, const std::vector<Vec> &w_list);

/// Largest (||s - x|| + ||y_s - y||) / r(x, y) where s solves the subproblem
/// at (x, y, rho) and y_s is the updated multiplier.
DiagnosticsReport consecutive_step_bound_check(const CompositeProblem &p, const KnownSolution &sol,
                                               const std::vector<double> &rho_list, double start_radius,
                                               int samples, std::uint64_t seed = 0);

} // namespace alm
