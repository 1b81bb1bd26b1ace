#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alm/augmented.hpp"

namespace alm {

struct RhoSchedule {
    enum class Kind { constant, geometric };
    Kind kind = Kind::constant;
    double rho0 = 10.0;
    double factor = 1.0;   // geometric only
    double cap = kInf;     // geometric only

    static RhoSchedule constant(double rho) { return {Kind::constant, rho, 1.0, kInf}; }
    static RhoSchedule geometric(double rho0, double factor, double cap = kInf) {
        return {Kind::geometric, rho0, factor, cap};
    }
    double at(int k) const;
};

struct ToleranceParams {
    double sigma = 1.0;
    double p = 1.5;
    double c_lin = 0.1;
};

struct SolverConfig {
    RhoSchedule rho = RhoSchedule::constant(10.0);
    ToleranceParams tol;
    double c_hat = 100.0;
    double stop_residual = 1e-9;
    int max_outer = 200;
    int max_inner = 5000;
    /// The driver asks each subproblem for min(eps_k, inner_tol); 0 uses eps_k.
    double inner_tol = 1e-12;
    std::uint64_t seed = 0;

    void validate() const;
};

/// min(c_lin t, sigma t^p).
double tolerance_fn(const SolverConfig &cfg, double t);

inline constexpr double kEpsFloor = 1e-13;
inline constexpr double kStationarityCap = 1e-12;

struct SubproblemResult {
    Vec x;
    int inner_iters = 0;
    double stationarity = 0;
};

/// Projected gradient with Barzilai-Borwein steps and an Armijo safeguard on
/// x -> L(x, y, rho) over theta. Stops when the normal-cone distance of the
/// negative gradient is at most max(eps, 1e-12) (eps = 0 asks for the cap).
/// `trace`, when given, receives the objective after every accepted step.
SubproblemResult solve_subproblem(const AugEvalContext &ctx, const Polyhedron &theta, const Vec &y,
                                  const Vec &x_start, double eps, int max_inner = 5000,
                                  std::vector<double> *trace = nullptr);

struct IterationRecord {
    int k = 0;
    Vec x;
    Vec y;
    double rho = 0;      // penalty that produced this iterate
    double eps = 0;      // scheduled tolerance that produced this iterate
    double eps_used = 0; // tolerance actually passed to the subproblem
    double residual = 0;
    double step_norm = 0;
    int inner_iters = 0;
    std::optional<double> dist_primal;
    std::optional<double> dist_dual;
    int locality_retries = 0; // subproblem re-solves spent on the locality test
    bool locality_violated = false;
};

enum class RunStatus { converged, max_outer, locality_failed, subproblem_failed };
std::string to_string(RunStatus s);

struct RunTrace {
    std::vector<IterationRecord> records;
    RunStatus status = RunStatus::max_outer;
};

RunTrace alm_run(const CompositeProblem &p, const Vec &x0, const Vec &y0, const SolverConfig &cfg,
                 const KnownSolution *known = nullptr);

} // namespace alm
