#pragma once

// NSGA-II adapted to the sparse simplex (projection repair plus constrained
// domination for the remaining linear rows) and its memetic variant NSMA,
// which periodically pushes offspring through a few MOIHT iterations.

#include "sparsefront/constraints.hpp"
#include "sparsefront/descent.hpp"
#include "sparsefront/line_search.hpp"
#include "sparsefront/objectives.hpp"

#include <cstdint>
#include <vector>

namespace sparsefront {

struct Member {
    VectorXd x;
    VectorXd F;
    double violation = 0.0;  // total linear-row violation, 0 when feasible
    int rank = 0;
    double crowding = 0.0;
};

struct Population {
    std::vector<Member> members;

    /// Members of rank 0.
    std::vector<Member> first_front() const;
};

struct GaParams {
    int N = 100;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // negative means 1/n
    double sbx_eta = 20.0;
    double mutation_eta = 20.0;
    std::uint64_t seed = 0;
    Budget budget;  // iterations count generations

    void validate() const;
};

/// n basis vectors followed by n random s-sparse points (support uniform
/// over all s-subsets, weights uniform on the simplex), each repaired with
/// normalize_project. Deterministic per seed.
std::vector<VectorXd> initial_points(int n, int s, std::uint64_t seed);

Population initial_population(const MultiObjective& obj, const Polyhedron& poly, int s, std::uint64_t seed);

/// Assigns rank and crowding using constrained domination.
void rank_population(std::vector<Member>& members);

/// feasible beats infeasible, lower violation beats higher, then Pareto dominance.
bool constrained_dominates(const Member& a, const Member& b);

Population nsga2_run(const MultiObjective& obj, const Polyhedron& poly, int s, const GaParams& params);

struct NsmaParams {
    int refine_every = 5;
    int refine_steps = 1;
    MoihtParams moiht;
};

Population nsma_run(const MultiObjective& obj, const Polyhedron& poly, int s, const GaParams& params,
                    const NsmaParams& memetic);

}  // namespace sparsefront
