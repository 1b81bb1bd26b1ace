#pragma once

#include <string>
#include <vector>

#include "alm/solver.hpp"

namespace alm {

enum class RateClass { q_linear, q_superlinear, inconclusive };
std::string to_string(RateClass c);

struct RateReport {
    std::vector<double> distances; // d_k
    std::vector<double> ratios;    // q_k = d_{k+1} / d_k
    double q_hat = 0;              // geometric mean of the tail ratios
    int tail = 0;                  // number of tail ratios used
    RateClass classification = RateClass::inconclusive;
    bool used_known_solution = false;
};

inline constexpr int kMinRateRecords = 5;

/// Rates from a sequence d_k (>= 5 entries). Q-linear when every tail ratio
/// is <= 0.95; Q-superlinear when additionally the tail is strictly
/// decreasing and its last ratio is at most half its first.
RateReport rates_from_sequence(const std::vector<double> &d);

/// d_k from the records' distance fields, else from x/y against `known`,
/// else the residuals.
RateReport estimate_rates(const RunTrace &trace, const KnownSolution *known = nullptr);

/// sqrt(||x - x_bar||^2 + dist(y, M)^2).
double solution_distance(const KnownSolution &sol, const Vec &x, const Vec &y);

} // namespace alm
