#include "alm/rates.hpp"

#include <cmath>

#include "alm/errors.hpp"

namespace alm {

std::string to_string(RateClass c) {
    switch (c) {
    case RateClass::q_linear: return "Q-linear";
    case RateClass::q_superlinear: return "Q-superlinear";
    case RateClass::inconclusive: return "inconclusive";
    }
    return "unknown";
}

double solution_distance(const KnownSolution &sol, const Vec &x, const Vec &y) {
    const double dp = (x - sol.x_bar).norm();
    const double dd = dist_to_polyhedron(sol.multiplier_set, y);
    return std::hypot(dp, dd);
}

RateReport rates_from_sequence(const std::vector<double> &d) {
    if (d.size() < static_cast<size_t>(kMinRateRecords))
        throw InsufficientDataError("estimate_rates: need at least " + std::to_string(kMinRateRecords) +
                                    " records, got " + std::to_string(d.size()));
    RateReport rep;
    rep.distances = d;
    for (size_t k = 0; k + 1 < d.size(); ++k) {
        if (!(d[k] >= 0) || !(d[k + 1] >= 0))
            throw InputError("estimate_rates: distances must be nonnegative");
        // 0/0 after exact convergence carries no information; treat as 0.
        rep.ratios.push_back(d[k] > 0 ? d[k + 1] / d[k] : 0.0);
    }
    const size_t n = rep.ratios.size();
    const size_t T = std::min<size_t>(5, n);
    rep.tail = static_cast<int>(T);
    double logsum = 0;
    bool zero = false;
    for (size_t i = n - T; i < n; ++i) {
        if (rep.ratios[i] == 0)
            zero = true;
        else
            logsum += std::log(rep.ratios[i]);
    }
    rep.q_hat = zero ? 0.0 : std::exp(logsum / static_cast<double>(T));

    bool linear = true, decreasing = true;
    for (size_t i = n - T; i < n; ++i) {
        if (!(rep.ratios[i] <= 0.95))
            linear = false;
        if (i > n - T && !(rep.ratios[i] < rep.ratios[i - 1]))
            decreasing = false;
    }
    const double q_first = rep.ratios[n - T], q_last = rep.ratios[n - 1];
    if (!linear)
        rep.classification = RateClass::inconclusive;
    else if (decreasing && T >= 2 && q_last <= q_first / 2)
        rep.classification = RateClass::q_superlinear;
    else
        rep.classification = RateClass::q_linear;
    return rep;
}

RateReport estimate_rates(const RunTrace &trace, const KnownSolution *known) {
    std::vector<double> d;
    bool used_known = false;
    for (const IterationRecord &r : trace.records) {
        if (r.dist_primal && r.dist_dual) {
            d.push_back(std::hypot(*r.dist_primal, *r.dist_dual));
            used_known = true;
        } else if (known && r.x.size() > 0) {
            d.push_back(solution_distance(*known, r.x, r.y));
            used_known = true;
        } else {
            d.push_back(r.residual);
        }
    }
    RateReport rep = rates_from_sequence(d);
    rep.used_known_solution = used_known;
    return rep;
}

} // namespace alm
