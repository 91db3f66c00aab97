#pragma once

// Weighted-sum baseline: weight grids and global solution of the scalarized
// cardinality-constrained problem min sum_j lambda_j f_j(x).

#include "sparsefront/constraints.hpp"
#include "sparsefront/descent.hpp"
#include "sparsefront/model.hpp"
#include "sparsefront/objectives.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sparsefront {

/// Simplex-lattice weights with the smallest resolution H giving at least
/// `count` points. Order is lexicographically descending in the first
/// coordinate, e.g. (1,0), (0.5,0.5), (0,1) for m=2, count=3.
std::vector<VectorXd> lambda_grid(int m, int count);

/// lambda'F(x) as a single-objective MultiObjective.
class ScalarizedObjective final : public MultiObjective {
public:
    ScalarizedObjective(const MultiObjective& base, VectorXd lambda) : base_(base), lambda_(std::move(lambda)) {}
    int dim() const override { return base_.dim(); }
    int count() const override { return 1; }
    VectorXd values(const VectorXd& x) const override;
    MatrixXd jacobian(const VectorXd& x) const override;

private:
    const MultiObjective& base_;
    VectorXd lambda_;
};

struct ScalarizationOptions {
    /// Supports are enumerated when C(n, s) is at most this; branch and
    /// bound is used above it.
    long enumeration_budget = 5000;
    long node_limit = 20000;
    bool force_branch_and_bound = false;
    int multistarts = 5;  // nonconvex selections only
    MospdParams mospd;
    std::uint64_t seed = 0;
    int threads = 1;
    /// scalarization_front stops starting new weights once exceeded; the
    /// iteration count is the number of weights started.
    Budget budget;
};

struct ScalarSolution {
    VectorXd lambda;
    VectorXd x;
    VectorXd F;          // internal orientation
    double value = kInf; // lambda'F(x)
    bool exact = false;  // certified global optimum
    std::string method;  // "enumeration", "branch_and_bound" or "penalty_decomposition"
};

/// Solves the scalarized problem for one weight vector. Throws
/// InfeasibleError when no support admits a feasible point.
ScalarSolution scalarize_solve(const PortfolioObjectives& obj, const VectorXd& lambda, const Polyhedron& poly, int s,
                               const ScalarizationOptions& options = {}, std::size_t weight_index = 0);

struct ScalarizationFront {
    FrontList front;
    std::vector<ScalarSolution> solutions;      // one per solved weight, grid order
    std::map<std::size_t, VectorXd> lambda_of;  // front entry id -> weight
    std::vector<std::string> failures;          // weights that could not be solved
};

/// Solves every weight, pairs each solution with its first super support and
/// keeps the nondominated ones.
ScalarizationFront scalarization_front(const PortfolioObjectives& obj, const Polyhedron& poly, int s,
                                       const std::vector<VectorXd>& grid, const ScalarizationOptions& options = {});

}  // namespace sparsefront
