#include "sparsefront/directions.hpp"

#include "sparsefront/qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sparsefront {

std::string to_string(DirectionStatus status) {
    switch (status) {
        case DirectionStatus::Optimal: return "optimal";
        case DirectionStatus::Stationary: return "stationary";
        case DirectionStatus::Infeasible: return "infeasible";
    }
    return "?";
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<SupportSet> all_supports(int n, int k) {
    std::vector<SupportSet> out;
    if (k < 0 || k > n) return out;
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        out.emplace_back(pick);
        int a = k - 1;
        while (a >= 0 && pick[a] == n - k + a) --a;
        if (a < 0) break;
        ++pick[a];
        for (int b = a + 1; b < k; ++b) pick[b] = pick[b - 1] + 1;
    }
    return out;
}

DirectionResult solve_minmax_qp(const DirectionProblem& P) {
    const Polyhedron& poly = *P.poly;
    const int n = poly.n;
    const int m = static_cast<int>(P.G.rows());
    DirectionResult out;
    out.support = SupportSet(P.free);
    out.v = VectorXd::Zero(n);

    VectorXd fixed = P.fixed.size() ? P.fixed : VectorXd::Zero(n);
    std::vector<char> is_free(n, 0);
    for (int i : P.free) is_free[i] = 1;
    for (int i = 0; i < n; ++i)
        if (is_free[i]) fixed[i] = 0.0;

    const VectorXd base = P.anchor + fixed;
    const Restriction r = restrict_polyhedron(poly, base, P.free);
    if (r.infeasible) {
        out.status = DirectionStatus::Infeasible;
        out.theta = kInf;
        return out;
    }
    const int k = r.num_free;
    const int na = r.n_aux;
    const int nv = k + na + 1;  // [d_F, y, t]
    const VectorXd Gfix = P.G * fixed;

    QpProblem qp;
    qp.H = MatrixXd::Zero(nv, nv);
    qp.H.topLeftCorner(k, k).diagonal().setConstant(P.weight);
    qp.q = VectorXd::Zero(nv);
    qp.q[nv - 1] = 1.0;

    qp.C = MatrixXd::Zero(r.C.rows() + m, nv);
    qp.e = VectorXd::Zero(r.C.rows() + m);
    qp.C.topLeftCorner(r.C.rows(), k + na) = r.C;
    qp.e.head(r.C.rows()) = r.e;
    for (int j = 0; j < m; ++j) {
        const Eigen::Index row = r.C.rows() + j;
        for (int a = 0; a < k; ++a) qp.C(row, a) = P.G(j, P.free[a]);
        qp.C(row, nv - 1) = -1.0;
        qp.e[row] = -Gfix[j];
    }
    qp.E = MatrixXd::Zero(r.E.rows(), nv);
    qp.E.leftCols(k + na) = r.E;
    qp.f = r.f;

    const QpResult res = solve_qp(qp);
    out.kkt_residual = res.kkt_residual;
    if (res.status == QpStatus::Infeasible) {
        out.status = DirectionStatus::Infeasible;
        out.theta = kInf;
        return out;
    }
    if (res.status != QpStatus::Optimal && res.kkt_residual > 1e-6)
        throw NumericalError("direction subproblem did not converge (KKT residual " + std::to_string(res.kkt_residual) +
                             ")");

    VectorXd d = fixed;
    for (int a = 0; a < k; ++a) d[P.free[a]] = res.w[a];
    // Interior-point iterates sit a hair inside the bounds; snap the
    // endpoint back onto x >= lower where it drifted below.
    for (int a = 0; a < k; ++a) {
        const int i = P.free[a];
        if (P.anchor[i] + d[i] < poly.lower[i]) d[i] = poly.lower[i] - P.anchor[i];
    }
    out.v = d;
    out.theta = (P.G * d).maxCoeff() + 0.5 * P.weight * d.squaredNorm();
    if (m == 0) out.theta = 0.5 * P.weight * d.squaredNorm();
    // d = 0 is feasible whenever nothing is displaced, so a positive value
    // can only be solver round-off.
    if (out.theta > 0.0 && fixed.isZero(0.0)) {
        out.v.setZero();
        out.theta = 0.0;
    }
    out.status = out.theta < kThetaTolerance ? DirectionStatus::Optimal : DirectionStatus::Stationary;
    return out;
}

namespace {

void require_feasible_anchor(const VectorXd& x, const Polyhedron& poly) {
    const FeasibilityReport rep = is_feasible(x, poly, 0, 1e-7);
    if (!rep) throw InfeasibleError("direction anchor is infeasible:\n" + rep.to_string());
}

}  // namespace

DirectionResult common_direction(const VectorXd& x, const SupportSet& J, const MatrixXd& grads, const Polyhedron& poly) {
    require_feasible_anchor(x, poly);
    DirectionProblem P;
    P.poly = &poly;
    P.anchor = x;
    P.G = grads;
    P.free = J.indices();
    return solve_minmax_qp(P);
}

DirectionResult partial_direction(const VectorXd& z, const SupportSet& J, const MatrixXd& grads,
                                  const std::vector<int>& I, const Polyhedron& poly) {
    if (I.empty()) throw std::invalid_argument("partial_direction: empty objective subset");
    require_feasible_anchor(z, poly);
    MatrixXd sub(static_cast<Eigen::Index>(I.size()), grads.cols());
    for (std::size_t a = 0; a < I.size(); ++a) sub.row(static_cast<Eigen::Index>(a)) = grads.row(I[a]);
    DirectionProblem P;
    P.poly = &poly;
    P.anchor = z;
    P.G = std::move(sub);
    P.free = J.indices();
    return solve_minmax_qp(P);
}

DirectionResult full_direction(const VectorXd& x, const MatrixXd& grads, const Polyhedron& poly) {
    require_feasible_anchor(x, poly);
    DirectionProblem P;
    P.poly = &poly;
    P.anchor = x;
    P.G = grads;
    P.free.resize(poly.n);
    std::iota(P.free.begin(), P.free.end(), 0);
    return solve_minmax_qp(P);
}

namespace {

std::vector<SupportSet> candidate_pool(const VectorXd& x, double L, const MatrixXd& grads, int s, long budget) {
    const int n = static_cast<int>(x.size());
    const VectorXd score = (x - grads.colwise().mean().transpose() / L).cwiseAbs();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });

    // Widest leading pool whose s-subsets fit the budget.
    int p = n;
    while (p > s && binomial(p, s) > static_cast<double>(budget)) --p;
    std::vector<int> pool(order.begin(), order.begin() + p);

    std::set<SupportSet> cands;
    for (const SupportSet& sub : all_supports(p, s)) {
        std::vector<int> idx;
        for (int a : sub.indices()) idx.push_back(pool[a]);
        cands.emplace(std::move(idx));
    }

    // Completions of the current support.
    const SupportSet S = support_of(x);
    if (static_cast<int>(S.size()) <= s) {
        std::vector<SupportSet> completions = super_supports(x, s);
        const long room = budget - static_cast<long>(cands.size());
        if (static_cast<long>(completions.size()) <= std::max(room, 0L)) {
            for (auto& c : completions) cands.insert(std::move(c));
        } else {
            std::vector<int> idx = S.indices();
            for (int i : order) {
                if (static_cast<int>(idx.size()) >= s) break;
                if (!S.contains(i)) idx.push_back(i);
            }
            cands.emplace(std::move(idx));
        }
    }
    return {cands.begin(), cands.end()};
}

}  // namespace

DirectionResult l_stationary_direction(const VectorXd& x, double L, const MatrixXd& grads, const Polyhedron& poly,
                                       int s, long budget) {
    if (!(L > 0.0)) throw std::invalid_argument("l_stationary_direction: L must be positive");
    require_feasible_anchor(x, poly);
    const int n = poly.n;
    s = std::min(s, n);

    std::vector<SupportSet> candidates;
    bool approximate = false;
    if (binomial(n, s) <= static_cast<double>(budget)) {
        candidates = all_supports(n, s);
    } else {
        candidates = candidate_pool(x, L, grads, s, budget);
        approximate = true;
    }

    DirectionResult best;
    best.status = DirectionStatus::Infeasible;
    best.theta = kInf;
    best.v = VectorXd::Zero(n);
    for (const SupportSet& J : candidates) {
        DirectionProblem P;
        P.poly = &poly;
        P.anchor = x;
        P.G = grads;
        P.weight = L;
        P.free = J.indices();
        P.fixed = -x;
        DirectionResult r = solve_minmax_qp(P);
        if (r.status == DirectionStatus::Infeasible) continue;
        // Candidates arrive in lexicographic order; ties keep the earlier one.
        if (best.status == DirectionStatus::Infeasible || r.theta < best.theta - 1e-12) best = std::move(r);
    }
    best.approximate = approximate;
    return best;
}

}  // namespace sparsefront
