#pragma once

// Convex part of the feasible set (simplex, bounds, beta window, sector
// exposure, turnover) plus the sparse projections used by the penalty
// decomposition and the evolutionary repair step.

#include "sparsefront/model.hpp"
#include "sparsefront/objectives.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sparsefront {

struct SectorConstraint {
    std::vector<int> indices;
    double min = 0.0;
    double max = 1.0;
};

struct TurnoverConstraint {
    VectorXd x0;
    double tau = 0.0;
};

struct ConstraintSpec {
    VectorXd lower;  // empty means 0
    VectorXd upper;  // empty means +inf
    std::optional<std::pair<double, double>> beta_window;
    std::vector<SectorConstraint> sectors;
    std::optional<TurnoverConstraint> turnover;

    /// Throws ConfigError when the specification is inconsistent for n assets.
    void validate(int n) const;
};

/// Linear system over z = (x, y), where y holds turnover auxiliaries:
///   A z <= b,  Aeq z = beq,  lower <= z <= upper.
/// The first n coordinates are portfolio weights.
struct Polyhedron {
    int n = 0;
    int n_aux = 0;
    MatrixXd A;
    VectorXd b;
    MatrixXd Aeq;
    VectorXd beq;
    VectorXd lower;
    VectorXd upper;
    std::vector<std::string> row_labels;  // one per row of A
    VectorXd turnover_anchor;               // x0 when n_aux > 0

    int var_dim() const { return n + n_aux; }

    /// Extends weights x with the smallest admissible auxiliaries |x - x0|.
    VectorXd complete(const VectorXd& x) const;
};

/// Rows of the polyhedron after substituting x = base + P d, where P picks
/// the `free` coordinates. Variables are [d (free.size()), y (n_aux)].
struct Restriction {
    MatrixXd C;
    VectorXd e;
    MatrixXd E;
    VectorXd f;
    bool infeasible = false;  // a fixed coordinate already violates its bounds
    int num_free = 0;
    int n_aux = 0;
};

Restriction restrict_polyhedron(const Polyhedron& poly, const VectorXd& base, const std::vector<int>& free);

/// Builds the polyhedron and certifies it nonempty with one feasibility
/// solve; throws InfeasibleError otherwise.
Polyhedron build_polyhedron(const ConstraintSpec& spec, const ObjectiveModel& model, int n);

/// Simplex-only polyhedron in R^n.
Polyhedron simplex_polyhedron(int n);

struct Violation {
    std::string kind;  // "row", "equality", "bound", "cardinality", "nonfinite"
    int row = -1;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<Violation> violations;
    double total_violation = 0.0;

    explicit operator bool() const { return feasible; }
    std::string to_string() const;
};

/// Tests rows within `tol` and cardinality |support_of(x)| <= s (skipped when s <= 0).
FeasibilityReport is_feasible(const VectorXd& x, const Polyhedron& poly, int s, double tol = kFeasibilityTolerance);

/// Sum of linear-row violations ignoring cardinality; 0 when feasible.
double linear_violation(const VectorXd& x, const Polyhedron& poly);

/// Euclidean projection onto {v >= 0, ||v||_0 <= s}; ties go to the lower index.
VectorXd sparse_project(const VectorXd& u, int s);

/// sparse_project followed by l1 normalisation onto the simplex. When the
/// projection vanishes the basis vector at argmax u is returned.
VectorXd normalize_project(const VectorXd& u, int s);

/// Closest point (Euclidean) to x in the polyhedron with every coordinate
/// outside `support` fixed to zero; nullopt if that slice is empty.
std::optional<VectorXd> project_restricted(const Polyhedron& poly, const VectorXd& x, const SupportSet& support);

}  // namespace sparsefront
