#pragma once

// Sparse Front Steepest Descent with linear constraints.
//
// Starting from feasible points paired with super support sets, each outer
// iteration moves every surviving point along its constrained common
// descent direction and then explores along partial directions for every
// subset of objectives. Points are only ever compared with points sharing
// the same super support set, so the front of each support grows
// independently.

#include "sparsefront/constraints.hpp"
#include "sparsefront/directions.hpp"
#include "sparsefront/line_search.hpp"
#include "sparsefront/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace sparsefront {

struct SfsdParams {
    ArmijoParams armijo;  // delta 0.5, gamma 1e-4, h_max 30
    double theta_tol = kThetaTolerance;
    /// Exploration is skipped for points whose normalised crowding distance
    /// inside their support group falls below this value.
    double crowding_gate = 0.05;
    Budget budget;
};

struct LinkedTrace {
    struct Link {
        std::size_t parent;
        long iteration;
    };
    std::map<std::size_t, Link> parent_of;
};

struct SfsdResult {
    FrontList front;
    long iterations = 0;
    /// An outer iteration left the list unchanged before the budget ran out.
    bool natural_termination = false;
    /// Every point's common-direction value was >= theta_tol at the last pass.
    bool all_stationary = false;
    std::vector<std::string> rejected;  // reports for infeasible inputs
    LinkedTrace lineage;
};

/// Largest delta^h such that the trial point improves some objective against
/// every member of its support group; 0 when no h <= h_max qualifies.
StepResult armijo_explore(const MultiObjective& obj, const VectorXd& z, const VectorXd& v,
                          const std::vector<VectorXd>& same_support_front, const ArmijoParams& params = {});

/// Nonempty subsets of {0..m-1}, ascending cardinality, lexicographic within.
std::vector<std::vector<int>> objective_subsets(int m);

SfsdResult sfsd_run(const FrontList& X0, const MultiObjective& obj, const Polyhedron& poly, int s,
                    const SfsdParams& params = {});

/// Pairs phase-one points with a super support set and filters dominated
/// points, producing the starting list. Infeasible points are dropped.
FrontList initial_front(const std::vector<VectorXd>& points, const std::vector<std::string>& origins,
                        const MultiObjective& obj, const Polyhedron& poly, int s);

}  // namespace sparsefront
