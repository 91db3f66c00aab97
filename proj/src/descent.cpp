#include "sparsefront/descent.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sparsefront {

std::string to_string(DescentStatus status) {
    switch (status) {
        case DescentStatus::LStationary: return "l_stationary";
        case DescentStatus::MolzStationary: return "molz_stationary";
        case DescentStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

StepResult armijo_full(const MultiObjective& obj, const VectorXd& x, const VectorXd& v, double theta,
                       const VectorXd& Fx, const ArmijoParams& params) {
    if (!(theta < 0.0)) throw std::invalid_argument("armijo_full: theta must be negative");
    StepResult out;
    out.F = Fx;
    double alpha = 1.0;
    for (int h = 0; h <= params.h_max; ++h, alpha *= params.delta) {
        VectorXd trial = x + alpha * v;
        clean_weights(trial);
        VectorXd Ft;
        try {
            Ft = obj.values(trial);
        } catch (const NumericalError&) {
            continue;
        }
        if (((Ft.array() - Fx.array() - params.gamma * alpha * theta) <= 0.0).all()) {
            out.alpha = alpha;
            out.F = std::move(Ft);
            out.found = true;
            return out;
        }
    }
    return out;
}

void clean_weights(VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < 0.0 && x[i] > -1e-9) x[i] = 0.0;
}

VectorXd PenalizedObjective::values(const VectorXd& x) const {
    return base_.values(x).array() + 0.5 * tau_ * (x - anchor_).squaredNorm();
}

MatrixXd PenalizedObjective::jacobian(const VectorXd& x) const {
    MatrixXd G = base_.jacobian(x);
    G.rowwise() += (tau_ * (x - anchor_)).transpose();
    return G;
}

MopgResult mopg(const MultiObjective& obj, const VectorXd& x0, const Polyhedron& poly, double eps, long max_iter,
                const ArmijoParams& armijo) {
    if (!(eps > 0.0)) throw std::invalid_argument("mopg: eps must be positive");
    if (!is_feasible(x0, poly, 0, 1e-7)) throw InfeasibleError("mopg: starting point is infeasible");
    MopgResult out;
    out.x = x0;
    VectorXd F = obj.values(out.x);
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        const DirectionResult dir = full_direction(out.x, obj.jacobian(out.x), poly);
        out.theta = dir.theta;
        if (dir.status == DirectionStatus::Infeasible || dir.theta >= -eps) return out;
        const StepResult step = armijo_full(obj, out.x, dir.v, dir.theta, F, armijo);
        if (!step.found) return out;
        out.x += step.alpha * dir.v;
        clean_weights(out.x);
        F = step.F;
    }
    out.theta = full_direction(out.x, obj.jacobian(out.x), poly).theta;
    return out;
}

DescentResult moiht(const MultiObjective& obj, const VectorXd& x0, const Polyhedron& poly, int s,
                    const MoihtParams& params, Trace* trace) {
    if (!is_feasible(x0, poly, s, 1e-7)) throw InfeasibleError("moiht: starting point is infeasible");
    DescentResult out;
    out.origin = "moiht";
    out.x = x0;
    out.status = DescentStatus::BudgetExhausted;
    for (out.iterations = 0;; ++out.iterations) {
        const DirectionResult dir =
            l_stationary_direction(out.x, params.L, obj.jacobian(out.x), poly, s, params.enumeration_budget);
        if (dir.status == DirectionStatus::Infeasible) throw InfeasibleError("moiht: L-stationarity subproblem infeasible");
        out.theta = dir.theta;
        out.approximate = out.approximate || dir.approximate;
        if (trace) trace->push_back({"moiht", out.iterations, dir.theta, 0.0, 0.0, 0.0});
        if (dir.theta >= params.theta_tol) {
            out.status = DescentStatus::LStationary;
            break;
        }
        if (out.iterations >= params.max_iter) break;
        VectorXd next = out.x + dir.v;
        clean_weights(next);
        // Coordinates outside the chosen support are zeroed exactly.
        for (Eigen::Index i = 0; i < next.size(); ++i)
            if (!dir.support.contains(static_cast<int>(i))) next[i] = 0.0;
        out.x = std::move(next);
    }
    out.F = obj.values(out.x);
    return out;
}

void MospdParams::validate() const {
    if (!(tau0 > 0.0) || !(sigma > 1.0) || !(eps0 > 0.0) || !(eps_decay > 0.0 && eps_decay < 1.0))
        throw ConfigError("invalid penalty decomposition parameters");
}

double restricted_descent(const MultiObjective& obj, VectorXd& x, const SupportSet& J, const Polyhedron& poly,
                          double theta_tol, long max_iter, const ArmijoParams& armijo) {
    VectorXd F = obj.values(x);
    double theta = 0.0;
    for (long it = 0; it <= max_iter; ++it) {
        const DirectionResult dir = common_direction(x, J, obj.jacobian(x), poly);
        theta = dir.theta;
        if (dir.status == DirectionStatus::Infeasible || theta >= theta_tol || it == max_iter) break;
        const StepResult step = armijo_full(obj, x, dir.v, theta, F, armijo);
        if (!step.found) break;
        x += step.alpha * dir.v;
        clean_weights(x);
        F = step.F;
    }
    return theta;
}

DescentResult mospd(const MultiObjective& obj, const VectorXd& x0, const Polyhedron& poly, int s,
                    const MospdParams& params, Trace* trace) {
    params.validate();
    if (!is_feasible(x0, poly, s, 1e-7)) throw InfeasibleError("mospd: starting point is infeasible");
    const VectorXd F0 = obj.values(x0);
    const VectorXd y0 = x0;
    VectorXd x = x0, y = y0;
    double tau = params.tau0;
    double eps = params.eps0;

    DescentResult out;
    out.origin = "mospd";
    out.status = DescentStatus::BudgetExhausted;

    for (long k = 0; k < params.max_outer; ++k) {
        out.iterations = k + 1;
        VectorXd u, v;
        {
            const PenalizedObjective Qk(obj, tau, y);
            const MopgResult trial = mopg(Qk, x, poly, eps, params.mopg_max_iter, params.armijo);
            const bool inside_level_set = ((Qk.values(trial.x) - F0).array() <= 0.0).all();
            if (inside_level_set) {
                u = x;
                v = y;
            } else {
                u = x0;
                v = y0;
            }
        }
        double theta = 0.0;
        for (long l = 0; l < params.max_inner; ++l) {
            const PenalizedObjective Ql(obj, tau, v);
            theta = full_direction(u, Ql.jacobian(u), poly).theta;
            if (theta >= -eps) break;
            u = mopg(Ql, u, poly, eps, params.mopg_max_iter, params.armijo).x;
            v = sparse_project(u, s);
        }
        x = std::move(u);
        y = std::move(v);
        const double gap = (x - y).norm();
        if (trace) trace->push_back({"mospd", k, theta, gap, tau, eps});
        tau *= params.sigma;
        eps *= params.eps_decay;
        if (gap <= params.xy_gap_stop) {
            out.status = DescentStatus::MolzStationary;
            break;
        }
    }

    // Report a point of the sparse feasible set: x itself when it already
    // satisfies cardinality, otherwise the point of the convex set nearest
    // to x inside the support of y.
    VectorXd point = x;
    SupportSet J;
    if (static_cast<int>(support_of(x).size()) <= s) {
        J = first_super_support(x, s);
    } else {
        std::vector<int> idx = support_of(y).indices();
        std::vector<int> order(x.size());
        for (int i = 0; i < static_cast<int>(x.size()); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
        for (int i : order) {
            if (static_cast<int>(idx.size()) >= s) break;
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
        }
        J = SupportSet(std::move(idx));
        if (auto p = project_restricted(poly, x, J)) {
            point = *p;
        } else {
            const VectorXd repaired = normalize_project(y, s);
            point = is_feasible(repaired, poly, s) ? repaired : x0;
            J = first_super_support(point, s);
        }
        for (Eigen::Index i = 0; i < point.size(); ++i)
            if (!J.contains(static_cast<int>(i))) point[i] = 0.0;
    }
    out.theta = restricted_descent(obj, point, J, poly, params.polish_theta, params.polish_max_iter, params.armijo);
    out.x = point;
    out.y = y;
    out.F = obj.values(out.x);
    return out;
}

std::vector<DescentResult> mohyb(const MultiObjective& obj, const std::vector<VectorXd>& starts,
                                 const Polyhedron& poly, int s, const MoihtParams& iht, const MospdParams& spd,
                                 const Budget& budget, Trace* trace) {
    std::vector<DescentResult> all;
    Stopwatch clock;
    long processed = 0;
    for (const VectorXd& start : starts) {
        if (clock.exceeded(budget, processed)) break;
        ++processed;
        try {
            DescentResult a = moiht(obj, start, poly, s, iht, trace);
            DescentResult b = mospd(obj, a.x, poly, s, spd, trace);
            all.push_back(std::move(a));
            all.push_back(std::move(b));
        } catch (const Error&) {
            continue;
        }
    }
    if (all.empty()) return all;
    std::vector<VectorXd> Fs;
    for (const auto& r : all) Fs.push_back(r.F);
    std::vector<DescentResult> out;
    for (std::size_t i : nondominated_filter(Fs)) out.push_back(std::move(all[i]));
    return out;
}

namespace {

VectorXd random_sparse_simplex(int n, int s, Rng& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int k = 0; k < s; ++k) std::swap(idx[k], idx[k + static_cast<int>(rng.below(n - k))]);
    VectorXd x = VectorXd::Zero(n);
    double total = 0.0;
    for (int k = 0; k < s; ++k) {
        const double e = -std::log(1.0 - rng.uniform());
        x[idx[k]] = e;
        total += e;
    }
    return x / total;
}

}  // namespace

double estimate_lipschitz(const PortfolioObjectives& obj, int s, Rng& rng, int samples) {
    const ObjectiveModel& m = obj.model();
    const int n = obj.dim();
    double L = 0.0;
    for (const auto& spec : obj.selection()) {
        double Lj = 0.0;
        switch (spec.id) {
            case ObjectiveId::ER:
            case ObjectiveId::ESG: Lj = 0.0; break;
            case ObjectiveId::V: {
                Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.Q, Eigen::EigenvaluesOnly);
                Lj = (spec.half ? 1.0 : 2.0) * std::max(es.eigenvalues().maxCoeff(), 0.0);
                break;
            }
            case ObjectiveId::SR:
            case ObjectiveId::SW: {
                PortfolioObjectives single(std::shared_ptr<const ObjectiveModel>(&m, [](const ObjectiveModel*) {}),
                                           {ObjectiveSpec{spec.id, 1.0, spec.maximize, spec.half}});
                for (int k = 0; k < samples; ++k) {
                    const VectorXd a = random_sparse_simplex(n, std::max(1, s), rng);
                    const VectorXd b = random_sparse_simplex(n, std::max(1, s), rng);
                    const double dx = (a - b).norm();
                    if (dx < 1e-12) continue;
                    try {
                        const double dg = (single.jacobian(a) - single.jacobian(b)).norm();
                        Lj = std::max(Lj, dg / dx);
                    } catch (const NumericalError&) {
                    }
                }
                break;
            }
        }
        L = std::max(L, spec.scale * Lj);
    }
    return L;
}

double default_moiht_L(const PortfolioObjectives& obj, int s, Rng& rng) {
    const double L = 1.1 * estimate_lipschitz(obj, s, rng);
    return std::max(L, 1e-3);
}

}  // namespace sparsefront
