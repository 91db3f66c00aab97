#pragma once

// Direction-finding subproblems. Every one of them is an instance of
//
//   theta = min_d  max_{j in I} g_j'd + (L/2)||d||^2
//           s.t.   anchor + d in the polyhedron, d fixed outside a subspace
//
// solved through its epigraph reformulation with the in-repo QP solver.

#include "sparsefront/constraints.hpp"
#include "sparsefront/model.hpp"

#include <string>
#include <vector>

namespace sparsefront {

enum class DirectionStatus { Optimal, Stationary, Infeasible };

std::string to_string(DirectionStatus status);

struct DirectionResult {
    double theta = 0.0;
    VectorXd v;  // length n, portfolio coordinates only
    DirectionStatus status = DirectionStatus::Stationary;
    SupportSet support;        // subspace the direction lives in
    bool approximate = false;  // L-stationary heuristic mode
    double kkt_residual = 0.0;

    bool is_descent(double theta_tol = kThetaTolerance) const {
        return status != DirectionStatus::Infeasible && theta < theta_tol;
    }
};

struct DirectionProblem {
    const Polyhedron* poly = nullptr;
    VectorXd anchor;
    MatrixXd G;            // gradient rows to take the max over
    double weight = 1.0;   // L on the quadratic term
    std::vector<int> free; // coordinates of d left free
    VectorXd fixed;        // displacement on the remaining coordinates (zero if empty)
};

/// Solves one min-max direction subproblem.
DirectionResult solve_minmax_qp(const DirectionProblem& problem);

/// Constrained common descent direction in the subspace of J.
DirectionResult common_direction(const VectorXd& x, const SupportSet& J, const MatrixXd& grads, const Polyhedron& poly);

/// Constrained partial descent direction: only objectives in I enter the max.
DirectionResult partial_direction(const VectorXd& z, const SupportSet& J, const MatrixXd& grads,
                                  const std::vector<int>& I, const Polyhedron& poly);

/// Projected-gradient direction over the whole polyhedron (no subspace).
DirectionResult full_direction(const VectorXd& x, const MatrixXd& grads, const Polyhedron& poly);

inline constexpr long kLStationaryBudget = 5000;

/// Cardinality-constrained subproblem with weight L. Exact by enumeration of
/// all C(n, s) supports when that count is within budget; otherwise solves a
/// candidate pool and flags the result as approximate.
DirectionResult l_stationary_direction(const VectorXd& x, double L, const MatrixXd& grads, const Polyhedron& poly,
                                       int s, long budget = kLStationaryBudget);

/// Enumerates C(n, k) index sets in lexicographic order.
std::vector<SupportSet> all_supports(int n, int k);

double binomial(int n, int k);

}  // namespace sparsefront
