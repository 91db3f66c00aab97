#pragma once

// Initialisation-phase descent solvers: projected gradient (MOPG), iterative
// hard thresholding (MOIHT), sparse penalty decomposition (MOSPD) and the
// MOHyb cascade of the last two.

#include "sparsefront/constraints.hpp"
#include "sparsefront/directions.hpp"
#include "sparsefront/line_search.hpp"
#include "sparsefront/objectives.hpp"
#include "sparsefront/rng.hpp"

#include <string>
#include <vector>

namespace sparsefront {

struct TraceRow {
    std::string solver;
    long iteration = 0;
    double theta = 0.0;
    double gap = 0.0;
    double tau = 0.0;
    double eps = 0.0;
};

using Trace = std::vector<TraceRow>;

enum class DescentStatus { LStationary, MolzStationary, BudgetExhausted };

std::string to_string(DescentStatus status);

struct DescentResult {
    VectorXd x;
    VectorXd y;  // sparse companion, MOSPD only
    VectorXd F;
    DescentStatus status = DescentStatus::BudgetExhausted;
    long iterations = 0;
    double theta = 0.0;
    bool approximate = false;
    std::string origin;
};

/// F(x) + (tau/2)||x - y||^2 on every component.
class PenalizedObjective final : public MultiObjective {
public:
    PenalizedObjective(const MultiObjective& base, double tau, VectorXd anchor)
        : base_(base), tau_(tau), anchor_(std::move(anchor)) {}
    int dim() const override { return base_.dim(); }
    int count() const override { return base_.count(); }
    VectorXd values(const VectorXd& x) const override;
    MatrixXd jacobian(const VectorXd& x) const override;

private:
    const MultiObjective& base_;
    double tau_;
    VectorXd anchor_;
};

struct MopgResult {
    VectorXd x;
    double theta = 0.0;
    long iterations = 0;
};

inline constexpr long kMopgMaxIterations = 500;

MopgResult mopg(const MultiObjective& obj, const VectorXd& x0, const Polyhedron& poly, double eps,
                long max_iter = kMopgMaxIterations, const ArmijoParams& armijo = {});

struct MoihtParams {
    double L = 1.0;
    double theta_tol = kThetaTolerance;
    long max_iter = 1000;
    long enumeration_budget = kLStationaryBudget;
};

DescentResult moiht(const MultiObjective& obj, const VectorXd& x0, const Polyhedron& poly, int s,
                    const MoihtParams& params, Trace* trace = nullptr);

struct MospdParams {
    double tau0 = 1e-2;
    double sigma = 2.0;
    double eps0 = 1e-3;
    double eps_decay = 0.9;
    double xy_gap_stop = 1e-3;
    long max_outer = 60;
    long max_inner = 100;
    long mopg_max_iter = kMopgMaxIterations;
    /// Final restricted descent on the reported support runs until the
    /// common-direction value reaches this threshold (or polish_max_iter).
    double polish_theta = kThetaTolerance;
    long polish_max_iter = 2000;
    ArmijoParams armijo;

    void validate() const;
};

DescentResult mospd(const MultiObjective& obj, const VectorXd& x0, const Polyhedron& poly, int s,
                    const MospdParams& params = {}, Trace* trace = nullptr);

/// Steepest descent with Armijo steps inside the subspace of J until the
/// common direction value reaches theta_tol. Returns the final theta.
double restricted_descent(const MultiObjective& obj, VectorXd& x, const SupportSet& J, const Polyhedron& poly,
                          double theta_tol, long max_iter, const ArmijoParams& armijo = {});

/// MOIHT then MOSPD from every start; both stages' points are merged and
/// nondominated-filtered. A failing start is skipped. The budget counts starts.
std::vector<DescentResult> mohyb(const MultiObjective& obj, const std::vector<VectorXd>& starts,
                                 const Polyhedron& poly, int s, const MoihtParams& iht, const MospdParams& spd,
                                 const Budget& budget = {}, Trace* trace = nullptr);

/// Gradient Lipschitz bound used to pick L: exact for linear and quadratic
/// objectives, sampled over `samples` random feasible pairs otherwise.
double estimate_lipschitz(const PortfolioObjectives& obj, int s, Rng& rng, int samples = 1000);

/// Default MOIHT constant: 1.1 times the largest objective Lipschitz bound.
double default_moiht_L(const PortfolioObjectives& obj, int s, Rng& rng);

}  // namespace sparsefront
