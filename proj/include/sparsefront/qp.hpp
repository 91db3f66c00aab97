#pragma once

// Dense convex QP solver used by every direction subproblem:
//
//   minimize    1/2 w'Hw + q'w
//   subject to  E w  = f
//               C w <= e
//
// H must be positive semidefinite. The method is a Mehrotra
// predictor-corrector primal-dual interior point iteration with an
// infeasible start; an unsuccessful run is retried once with heavier
// regularisation of the KKT system.

#include <Eigen/Dense>

#include <string>

namespace sparsefront {

struct QpProblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd q;
    Eigen::MatrixXd E;
    Eigen::VectorXd f;
    Eigen::MatrixXd C;
    Eigen::VectorXd e;
};

enum class QpStatus { Optimal, Infeasible, MaxIterations };

std::string to_string(QpStatus status);

struct QpOptions {
    double tolerance = 1e-9;
    int max_iterations = 200;
};

struct QpResult {
    QpStatus status = QpStatus::MaxIterations;
    Eigen::VectorXd w;
    Eigen::VectorXd eq_dual;
    Eigen::VectorXd ineq_dual;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
};

QpResult solve_qp(const QpProblem& problem, const QpOptions& options = {});

}  // namespace sparsefront
