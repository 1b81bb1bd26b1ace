#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alm/model.hpp"

namespace alm {

struct CatalogProblem {
    std::string id;
    CompositeProblem problem;
    KnownSolution solution;
    std::string doc;
    Vec x0; // default start (in theta)
    Vec y0;
    /// Same g written as an explicit CPLQ, when the catalog provides one.
    std::optional<ConvexFunction> g_as_cplq;
};

/// Ids in catalog order: P1, P2, P3, P4.
std::vector<std::string> catalog_ids();

/// Throws InputError for unknown ids.
CatalogProblem catalog_problem(const std::string &id);

/// Residual at the declared solution and at every multiplier vertex; the
/// largest value found.
double catalog_solution_residual(const CatalogProblem &c);

/// l1 norm on R^m as 2^m orthant pieces.
ConvexFunction l1_as_cplq(int m, double weight = 1.0);

} // namespace alm
