#pragma once

// Front-quality metrics, support recall, reference fronts and performance
// profiles. All functions take objective vectors in minimisation form.

#include "sparsefront/model.hpp"

#include <string>
#include <vector>

namespace sparsefront {

using Front = std::vector<VectorXd>;

/// Fraction of each solver's points not strictly dominated by any point of
/// the union. Exact duplicates survive for every solver holding them. An
/// empty solver front scores 0.
std::vector<double> purity(const std::vector<Front>& fronts);

/// Largest l-infinity gap between consecutive points when sorting by each
/// objective in turn. Points equal within 1e-9 are merged first. A single
/// input point gives +infinity.
double gamma_spread(const Front& front);

/// Dominated volume up to `reference`. Points not strictly below the
/// reference in every coordinate are ignored.
double hypervolume(const Front& front, const VectorXd& reference);

/// Nadir of the union plus `margin` times each objective's range.
VectorXd reference_point(const std::vector<Front>& fronts, double margin = 0.1);

/// |solver ∩ reference| / |reference| under exact support equality.
double recall(const std::vector<SupportSet>& solver, const std::vector<SupportSet>& reference);

struct ReferencePoint {
    VectorXd F;
    SupportSet support;
    std::string source;
    VectorXd x;  // optional weights
};

struct ReferenceFront {
    std::vector<ReferencePoint> points;

    std::vector<SupportSet> supports() const;  // distinct, sorted
    Front objective_vectors() const;
};

/// Union of every run, filtered to its nondominated points (duplicates kept once).
ReferenceFront build_reference(const std::vector<std::vector<ReferencePoint>>& runs);

struct ProfileStep {
    double tau;
    double fraction;
};

/// Dolan-More performance profile of values[solver][problem]. Non-finite
/// cells get an infinite ratio. Each curve is a list of (tau, fraction)
/// breakpoints with tau ascending, starting at tau = 1.
std::vector<std::vector<ProfileStep>> performance_profile(const std::vector<std::vector<double>>& values,
                                                          bool higher_is_better);

}  // namespace sparsefront
