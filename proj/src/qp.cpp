#include "sparsefront/qp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sparsefront {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(QpStatus status) {
    switch (status) {
        case QpStatus::Optimal: return "optimal";
        case QpStatus::Infeasible: return "infeasible";
        case QpStatus::MaxIterations: return "max_iterations";
    }
    return "?";
}

namespace {

double inf_norm(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double max_step(const VectorXd& v, const VectorXd& dv) {
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
    return alpha;
}

QpResult run_ipm(const QpProblem& P, const QpOptions& opt, double reg) {
    const Eigen::Index nv = P.q.size();
    const Eigen::Index ne = P.E.rows();
    const Eigen::Index ni = P.C.rows();

    VectorXd w = VectorXd::Zero(nv);
    VectorXd lam = VectorXd::Zero(ne);
    VectorXd s(ni), z(ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        s[i] = std::max(P.e[i] - P.C.row(i).dot(w), 1.0);
        z[i] = 1.0;
    }

    const double scale_d = 1.0 + inf_norm(P.q);
    const double scale_e = 1.0 + inf_norm(P.f);
    const double scale_i = 1.0 + inf_norm(P.e);

    QpResult res;
    MatrixXd K(nv + ne, nv + ne);
    VectorXd rhs(nv + ne);
    double best_primal = std::numeric_limits<double>::infinity();
    int stalled = 0;

    for (int it = 0; it <= opt.max_iterations; ++it) {
        const VectorXd rd = P.H * w + P.q + P.E.transpose() * lam + P.C.transpose() * z;
        const VectorXd re = P.E * w - P.f;
        const VectorXd ri = P.C * w + s - P.e;
        const double mu = ni ? s.dot(z) / static_cast<double>(ni) : 0.0;

        const double primal = std::max(inf_norm(re) / scale_e, inf_norm(ri) / scale_i);
        const double kkt = std::max({inf_norm(rd) / scale_d, primal, mu});
        res.iterations = it;
        res.kkt_residual = kkt;
        if (kkt <= opt.tolerance) {
            res.status = QpStatus::Optimal;
            break;
        }
        if (it == opt.max_iterations) {
            res.status = primal > 1e-6 ? QpStatus::Infeasible : QpStatus::MaxIterations;
            break;
        }
        // Duals blowing up while the primal residual refuses to shrink is
        // the usual signature of an empty feasible region.
        if (primal < 0.5 * best_primal) {
            best_primal = primal;
            stalled = 0;
        } else if (++stalled > 25 && primal > 1e-6) {
            res.status = QpStatus::Infeasible;
            break;
        }
        if (primal > 1e-6 && (inf_norm(z) > 1e13 || inf_norm(lam) > 1e13)) {
            res.status = QpStatus::Infeasible;
            break;
        }

        const VectorXd W = z.cwiseQuotient(s);
        K.setZero();
        K.topLeftCorner(nv, nv) = P.H + P.C.transpose() * W.asDiagonal() * P.C;
        K.topLeftCorner(nv, nv).diagonal().array() += reg;
        if (ne) {
            K.topRightCorner(nv, ne) = P.E.transpose();
            K.bottomLeftCorner(ne, nv) = P.E;
            K.bottomRightCorner(ne, ne).diagonal().array() = -reg;
        }
        Eigen::PartialPivLU<MatrixXd> lu(K);

        auto solve = [&](const VectorXd& rc, VectorXd& dw, VectorXd& dlam, VectorXd& ds, VectorXd& dz) {
            rhs.head(nv) = -rd + P.C.transpose() * (rc - z.cwiseProduct(ri)).cwiseQuotient(s);
            if (ne) rhs.tail(ne) = -re;
            const VectorXd sol = lu.solve(rhs);
            dw = sol.head(nv);
            dlam = sol.tail(ne);
            ds = -ri - P.C * dw;
            dz = (-rc - z.cwiseProduct(ds)).cwiseQuotient(s);
        };

        VectorXd dw, dlam, ds, dz;
        VectorXd rc = s.cwiseProduct(z);
        solve(rc, dw, dlam, ds, dz);
        const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
        double sigma = 0.0;
        if (ni) {
            const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(ni);
            sigma = std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3.0);
            sigma = std::min(sigma, 1.0);
            rc.array() += ds.cwiseProduct(dz).array() - sigma * mu;
            solve(rc, dw, dlam, ds, dz);
        }
        double alpha = std::min(1.0, 0.995 * std::min(max_step(s, ds), max_step(z, dz)));
        if (ni) {
            // The second-order correction occasionally makes the iterates
            // cycle; fall back to a plain centred step when it does not
            // reduce complementarity enough.
            auto gap_after = [&](double a, const VectorXd& s_dir, const VectorXd& z_dir) {
                return (s + a * s_dir).dot(z + a * z_dir) / static_cast<double>(ni);
            };
            if (gap_after(alpha, ds, dz) > (1.0 - 0.1 * alpha) * mu) {
                VectorXd cw, cl, cs, cz;
                const VectorXd centred = (s.cwiseProduct(z)).array() - 0.1 * mu;
                solve(centred, cw, cl, cs, cz);
                const double a2 = std::min(1.0, 0.995 * std::min(max_step(s, cs), max_step(z, cz)));
                if (gap_after(a2, cs, cz) < gap_after(alpha, ds, dz)) {
                    dw = std::move(cw);
                    dlam = std::move(cl);
                    ds = std::move(cs);
                    dz = std::move(cz);
                    alpha = a2;
                }
            }
        }
        w += alpha * dw;
        lam += alpha * dlam;
        s += alpha * ds;
        z += alpha * dz;
        s = s.cwiseMax(1e-300);
        z = z.cwiseMax(1e-300);
    }

    res.w = w;
    res.eq_dual = lam;
    res.ineq_dual = z;
    res.objective = 0.5 * w.dot(P.H * w) + P.q.dot(w);
    return res;
}

// Indices of a maximal linearly independent subset of the rows of M, taken
// greedily in order.
std::vector<Eigen::Index> independent_rows(const MatrixXd& M) {
    std::vector<Eigen::Index> keep;
    std::vector<VectorXd> basis;
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        VectorXd v = M.row(r).transpose();
        const double norm = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (const VectorXd& b : basis) v -= b.dot(v) * b;
        if (v.norm() <= 1e-10 * std::max(norm, 1.0)) continue;
        basis.push_back(v / v.norm());
        keep.push_back(r);
    }
    return keep;
}

// Re-solves the KKT system with the inequalities the interior point method
// identified as active imposed as equalities. Degenerate active sets are
// reduced to an independent subset, preferring equalities and then the
// inequalities with the largest multipliers. Accepted only when the result
// is primal feasible, dual feasible and no worse than the IPM objective, so
// the output lands exactly on its active faces.
void polish(const QpProblem& P, QpResult& res, double tol) {
    const Eigen::Index nv = P.q.size();
    const Eigen::Index ne = P.E.rows();
    const Eigen::Index ni = P.C.rows();
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < ni; ++i) {
        const double slack = P.e[i] - P.C.row(i).dot(res.w);
        if (slack < res.ineq_dual[i]) active.push_back(i);
    }
    std::stable_sort(active.begin(), active.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return res.ineq_dual[a] > res.ineq_dual[b]; });

    MatrixXd rows(ne + static_cast<Eigen::Index>(active.size()), nv);
    VectorXd rhs_rows(rows.rows());
    if (ne) {
        rows.topRows(ne) = P.E;
        rhs_rows.head(ne) = P.f;
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
        rows.row(ne + static_cast<Eigen::Index>(a)) = P.C.row(active[a]);
        rhs_rows[ne + static_cast<Eigen::Index>(a)] = P.e[active[a]];
    }
    const std::vector<Eigen::Index> keep = independent_rows(rows);
    const Eigen::Index nk = static_cast<Eigen::Index>(keep.size());

    MatrixXd K = MatrixXd::Zero(nv + nk, nv + nk);
    VectorXd rhs = VectorXd::Zero(nv + nk);
    K.topLeftCorner(nv, nv) = P.H;
    rhs.head(nv) = -P.q;
    for (Eigen::Index a = 0; a < nk; ++a) {
        K.block(0, nv + a, nv, 1) = rows.row(keep[a]).transpose();
        K.block(nv + a, 0, 1, nv) = rows.row(keep[a]);
        rhs[nv + a] = rhs_rows[keep[a]];
    }
    Eigen::FullPivLU<MatrixXd> lu(K);
    if (!lu.isInvertible()) return;
    const VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite() || (K * sol - rhs).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff())) return;
    const VectorXd w = sol.head(nv);
    for (Eigen::Index a = 0; a < nk; ++a)
        if (keep[a] >= ne && sol[nv + a] < -tol) return;
    const double scale_e = 1.0 + inf_norm(P.e);
    if (ni && ((P.C * w - P.e).array() > tol * scale_e).any()) return;
    if (ne && inf_norm(P.E * w - P.f) > tol * (1.0 + inf_norm(P.f))) return;
    const double obj = 0.5 * w.dot(P.H * w) + P.q.dot(w);
    if (obj > res.objective + tol * (1.0 + std::abs(res.objective))) return;
    res.w = w;
    res.eq_dual = VectorXd::Zero(ne);
    res.ineq_dual = VectorXd::Zero(ni);
    for (Eigen::Index a = 0; a < nk; ++a) {
        if (keep[a] < ne) res.eq_dual[keep[a]] = sol[nv + a];
        else res.ineq_dual[active[keep[a] - ne]] = sol[nv + a];
    }
    res.objective = obj;
}

}  // namespace

QpResult solve_qp(const QpProblem& problem, const QpOptions& options) {
    QpResult first = run_ipm(problem, options, 1e-12);
    if (first.status == QpStatus::Infeasible) return first;
    if (first.status != QpStatus::Optimal) {
        QpResult second = run_ipm(problem, options, 1e-8);
        if (second.status == QpStatus::Optimal || second.kkt_residual < first.kkt_residual) first = std::move(second);
    }
    if (first.status == QpStatus::Optimal) polish(problem, first, options.tolerance);
    return first;
}

}  // namespace sparsefront
