#include "sparsefront/constraints.hpp"

#include "sparsefront/qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sparsefront {

void ConstraintSpec::validate(int n) const {
    if (lower.size() && lower.size() != n) throw ConfigError("lower bounds have wrong length");
    if (upper.size() && upper.size() != n) throw ConfigError("upper bounds have wrong length");
    const VectorXd lo = lower.size() ? lower : VectorXd::Zero(n);
    const VectorXd hi = upper.size() ? upper : VectorXd::Constant(n, kInf);
    if ((lo.array() < 0.0).any()) throw ConfigError("lower bounds must be nonnegative (no short selling)");
    if ((lo.array() > hi.array()).any()) throw ConfigError("lower bound exceeds upper bound");
    if (lo.sum() > 1.0 + 1e-12) throw ConfigError("lower bounds sum above 1; simplex is unreachable");
    if (hi.sum() < 1.0 - 1e-12) throw ConfigError("upper bounds sum below 1; simplex is unreachable");
    if (beta_window) {
        const auto [bmin, bmax] = *beta_window;
        if (bmin < 0.0 || bmin > bmax) throw ConfigError("beta window must satisfy 0 <= beta_min <= beta_max");
    }
    for (const auto& sec : sectors) {
        if (sec.min > sec.max) throw ConfigError("sector minimum exceeds maximum");
        for (int i : sec.indices)
            if (i < 0 || i >= n) throw ConfigError("sector index out of range");
    }
    if (turnover) {
        if (turnover->x0.size() != n) throw ConfigError("turnover anchor has wrong length");
        if (turnover->tau < 0.0) throw ConfigError("turnover budget must be nonnegative");
    }
}

VectorXd Polyhedron::complete(const VectorXd& x) const {
    VectorXd z(var_dim());
    z.head(n) = x.head(n);
    if (n_aux) z.tail(n_aux) = (x.head(n) - turnover_anchor).cwiseAbs();
    return z;
}

Polyhedron simplex_polyhedron(int n) {
    Polyhedron p;
    p.n = n;
    p.A.resize(0, n);
    p.b.resize(0);
    p.Aeq = MatrixXd::Ones(1, n);
    p.beq = VectorXd::Ones(1);
    p.lower = VectorXd::Zero(n);
    p.upper = VectorXd::Constant(n, kInf);
    return p;
}

Polyhedron build_polyhedron(const ConstraintSpec& spec, const ObjectiveModel& model, int n) {
    spec.validate(n);
    Polyhedron p;
    p.n = n;
    p.n_aux = spec.turnover ? n : 0;
    const int dim = p.var_dim();

    std::vector<VectorXd> rows;
    std::vector<double> rhs;
    auto add_row = [&](VectorXd r, double v, std::string label) {
        rows.push_back(std::move(r));
        rhs.push_back(v);
        p.row_labels.push_back(std::move(label));
    };

    if (spec.beta_window) {
        if (model.beta.size() != n) throw ConfigError("beta window requires one beta per asset");
        VectorXd r = VectorXd::Zero(dim);
        r.head(n) = model.beta;
        add_row(-r, -spec.beta_window->first, "beta_min");
        add_row(r, spec.beta_window->second, "beta_max");
    }
    for (std::size_t k = 0; k < spec.sectors.size(); ++k) {
        VectorXd r = VectorXd::Zero(dim);
        for (int i : spec.sectors[k].indices) r[i] = 1.0;
        add_row(-r, -spec.sectors[k].min, "sector_min[" + std::to_string(k) + "]");
        add_row(r, spec.sectors[k].max, "sector_max[" + std::to_string(k) + "]");
    }
    if (spec.turnover) {
        const VectorXd& x0 = spec.turnover->x0;
        for (int i = 0; i < n; ++i) {
            VectorXd r = VectorXd::Zero(dim);
            r[i] = 1.0;
            r[n + i] = -1.0;
            add_row(r, x0[i], "turnover_up[" + std::to_string(i) + "]");
            r[i] = -1.0;
            add_row(r, -x0[i], "turnover_down[" + std::to_string(i) + "]");
        }
        VectorXd r = VectorXd::Zero(dim);
        r.tail(n).setOnes();
        add_row(r, spec.turnover->tau, "turnover_budget");
        p.turnover_anchor = x0;
    }

    p.A.resize(static_cast<Eigen::Index>(rows.size()), dim);
    p.b.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        p.A.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
        p.b[static_cast<Eigen::Index>(k)] = rhs[k];
    }
    p.Aeq = MatrixXd::Zero(1, dim);
    p.Aeq.leftCols(n).setOnes();
    p.beq = VectorXd::Ones(1);
    p.lower = VectorXd::Zero(dim);
    p.upper = VectorXd::Constant(dim, kInf);
    if (spec.lower.size()) p.lower.head(n) = spec.lower;
    if (spec.upper.size()) p.upper.head(n) = spec.upper;

    SupportSet all;
    {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        all = SupportSet(std::move(idx));
    }
    if (!project_restricted(p, VectorXd::Constant(n, 1.0 / n), all))
        throw InfeasibleError("constraint system has an empty feasible region");
    return p;
}

Restriction restrict_polyhedron(const Polyhedron& poly, const VectorXd& base, const std::vector<int>& free) {
    Restriction r;
    const int n = poly.n;
    const int k = static_cast<int>(free.size());
    const int na = poly.n_aux;
    r.num_free = k;
    r.n_aux = na;
    const int nv = k + na;

    std::vector<char> is_free(n, 0);
    for (int i : free) is_free[i] = 1;
    for (int i = 0; i < n; ++i) {
        if (is_free[i]) continue;
        if (base[i] < poly.lower[i] - kFeasibilityTolerance || base[i] > poly.upper[i] + kFeasibilityTolerance)
            r.infeasible = true;
    }

    auto map_row = [&](const auto& row, MatrixXd& out, Eigen::Index at) {
        for (int a = 0; a < k; ++a) out(at, a) = row(free[a]);
        for (int a = 0; a < na; ++a) out(at, k + a) = row(n + a);
    };

    int n_upper = 0, n_aux_upper = 0;
    for (int i : free)
        if (std::isfinite(poly.upper[i])) ++n_upper;
    for (int a = 0; a < na; ++a)
        if (std::isfinite(poly.upper[n + a])) ++n_aux_upper;

    const Eigen::Index rows = poly.A.rows() + k + n_upper + na + n_aux_upper;
    r.C = MatrixXd::Zero(rows, nv);
    r.e = VectorXd::Zero(rows);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < poly.A.rows(); ++i, ++at) {
        map_row(poly.A.row(i), r.C, at);
        r.e[at] = poly.b[i] - poly.A.row(i).head(n).dot(base.head(n));
    }
    for (int a = 0; a < k; ++a, ++at) {
        r.C(at, a) = -1.0;
        r.e[at] = base[free[a]] - poly.lower[free[a]];
    }
    for (int a = 0; a < k; ++a) {
        if (!std::isfinite(poly.upper[free[a]])) continue;
        r.C(at, a) = 1.0;
        r.e[at] = poly.upper[free[a]] - base[free[a]];
        ++at;
    }
    for (int a = 0; a < na; ++a, ++at) {
        r.C(at, k + a) = -1.0;
        r.e[at] = -poly.lower[n + a];
    }
    for (int a = 0; a < na; ++a) {
        if (!std::isfinite(poly.upper[n + a])) continue;
        r.C(at, k + a) = 1.0;
        r.e[at] = poly.upper[n + a];
        ++at;
    }

    std::vector<Eigen::Index> keep;
    MatrixXd E = MatrixXd::Zero(poly.Aeq.rows(), nv);
    VectorXd f(poly.Aeq.rows());
    for (Eigen::Index i = 0; i < poly.Aeq.rows(); ++i) {
        map_row(poly.Aeq.row(i), E, i);
        f[i] = poly.beq[i] - poly.Aeq.row(i).head(n).dot(base.head(n));
        if (E.row(i).cwiseAbs().maxCoeff() == 0.0) {
            if (std::abs(f[i]) > kFeasibilityTolerance) r.infeasible = true;
        } else {
            keep.push_back(i);
        }
    }
    r.E.resize(static_cast<Eigen::Index>(keep.size()), nv);
    r.f.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        r.E.row(static_cast<Eigen::Index>(a)) = E.row(keep[a]);
        r.f[static_cast<Eigen::Index>(a)] = f[keep[a]];
    }
    return r;
}

std::string FeasibilityReport::to_string() const {
    if (feasible) return "feasible";
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.kind << " row=" << v.row << " lhs=" << v.lhs << " rhs=" << v.rhs << " slack=" << v.slack << "\n";
    return os.str();
}

namespace {

void check_rows(const VectorXd& z, const Polyhedron& poly, double tol, FeasibilityReport& rep) {
    auto record = [&](const char* kind, int row, double lhs, double rhs, double slack) {
        rep.feasible = false;
        rep.total_violation += -slack;
        rep.violations.push_back({kind, row, lhs, rhs, slack});
    };
    for (Eigen::Index i = 0; i < poly.A.rows(); ++i) {
        const double lhs = poly.A.row(i).dot(z);
        const double slack = poly.b[i] - lhs;
        if (slack < -tol) record("row", static_cast<int>(i), lhs, poly.b[i], slack);
    }
    for (Eigen::Index i = 0; i < poly.Aeq.rows(); ++i) {
        const double lhs = poly.Aeq.row(i).dot(z);
        const double gap = std::abs(lhs - poly.beq[i]);
        if (gap > tol) record("equality", static_cast<int>(i), lhs, poly.beq[i], -gap);
    }
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] < poly.lower[i] - tol) record("bound", static_cast<int>(i), z[i], poly.lower[i], z[i] - poly.lower[i]);
        if (z[i] > poly.upper[i] + tol) record("bound", static_cast<int>(i), z[i], poly.upper[i], poly.upper[i] - z[i]);
    }
}

}  // namespace

FeasibilityReport is_feasible(const VectorXd& x, const Polyhedron& poly, int s, double tol) {
    FeasibilityReport rep;
    if (x.size() != poly.n || !x.allFinite()) {
        rep.feasible = false;
        rep.violations.push_back({"nonfinite", -1, 0.0, 0.0, 0.0});
        rep.total_violation = kInf;
        return rep;
    }
    check_rows(poly.complete(x), poly, tol, rep);
    if (s > 0) {
        const int card = static_cast<int>(support_of(x).size());
        if (card > s) {
            rep.feasible = false;
            rep.violations.push_back({"cardinality", -1, static_cast<double>(card), static_cast<double>(s),
                                      static_cast<double>(s - card)});
        }
    }
    return rep;
}

double linear_violation(const VectorXd& x, const Polyhedron& poly) {
    FeasibilityReport rep;
    check_rows(poly.complete(x), poly, 0.0, rep);
    return rep.total_violation;
}

VectorXd sparse_project(const VectorXd& u, int s) {
    const Eigen::Index n = u.size();
    VectorXd v = VectorXd::Zero(n);
    if (s <= 0) return v;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return u[a] > u[b]; });
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(s, n); ++k) {
        const Eigen::Index i = order[static_cast<std::size_t>(k)];
        if (u[i] > 0.0) v[i] = u[i];
    }
    return v;
}

VectorXd normalize_project(const VectorXd& u, int s) {
    VectorXd v = sparse_project(u, s);
    const double total = v.sum();
    if (total > 0.0) return v / total;
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < u.size(); ++i)
        if (u[i] > u[best]) best = i;
    VectorXd e = VectorXd::Zero(u.size());
    e[best] = 1.0;
    return e;
}

std::optional<VectorXd> project_restricted(const Polyhedron& poly, const VectorXd& x, const SupportSet& support) {
    VectorXd base = VectorXd::Zero(poly.n);
    const std::vector<int>& free = support.indices();
    const Restriction r = restrict_polyhedron(poly, base, free);
    if (r.infeasible) return std::nullopt;
    const int k = r.num_free;
    const int nv = k + r.n_aux;
    QpProblem qp;
    qp.H = MatrixXd::Zero(nv, nv);
    qp.H.topLeftCorner(k, k).setIdentity();
    // Tiny weight on the auxiliaries keeps the KKT system nonsingular.
    if (r.n_aux) qp.H.bottomRightCorner(r.n_aux, r.n_aux).diagonal().setConstant(1e-10);
    qp.q = VectorXd::Zero(nv);
    for (int a = 0; a < k; ++a) qp.q[a] = -x[free[a]];
    qp.E = r.E;
    qp.f = r.f;
    qp.C = r.C;
    qp.e = r.e;
    const QpResult res = solve_qp(qp);
    if (res.status != QpStatus::Optimal) return std::nullopt;
    VectorXd out = VectorXd::Zero(poly.n);
    for (int a = 0; a < k; ++a) out[free[a]] = std::max(res.w[a], 0.0);
    if (!is_feasible(out, poly, 0, 1e-7)) return std::nullopt;
    return out;
}

}  // namespace sparsefront
