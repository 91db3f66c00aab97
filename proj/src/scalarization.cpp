#include "sparsefront/scalarization.hpp"

#include "sparsefront/directions.hpp"
#include "sparsefront/qp.hpp"
#include "sparsefront/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <thread>

namespace sparsefront {

namespace {

void compositions(int m, int H, int remaining, VectorXd& current, int pos, std::vector<VectorXd>& out) {
    if (pos == m - 1) {
        current[pos] = static_cast<double>(remaining) / H;
        out.push_back(current);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        current[pos] = static_cast<double>(k) / H;
        compositions(m, H, remaining - k, current, pos + 1, out);
    }
}

}  // namespace

std::vector<VectorXd> lambda_grid(int m, int count) {
    if (m < 1) throw ConfigError("lambda_grid: at least one objective is required");
    if (count < m) throw ConfigError("lambda_grid: count must be at least the number of objectives");
    std::vector<VectorXd> out;
    if (m == 1) {
        out.push_back(VectorXd::Ones(1));
        return out;
    }
    int H = 1;
    while (binomial(H + m - 1, m - 1) < count) ++H;
    VectorXd current(m);
    compositions(m, H, H, current, 0, out);
    return out;
}

VectorXd ScalarizedObjective::values(const VectorXd& x) const {
    VectorXd out(1);
    out[0] = lambda_.dot(base_.values(x));
    return out;
}

MatrixXd ScalarizedObjective::jacobian(const VectorXd& x) const { return lambda_.transpose() * base_.jacobian(x); }

namespace {

bool ties(double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)); }

// Quadratic form of lambda'F when every objective is linear or convex quadratic.
struct Quadratic {
    MatrixXd H;
    VectorXd q;
};

Quadratic scalar_quadratic(const PortfolioObjectives& obj, const VectorXd& lambda) {
    const int n = obj.dim();
    const ObjectiveModel& model = obj.model();
    Quadratic out{MatrixXd::Zero(n, n), VectorXd::Zero(n)};
    for (int j = 0; j < obj.count(); ++j) {
        const ObjectiveSpec& spec = obj.selection()[j];
        const double w = lambda[j] * (spec.is_maximized() ? -spec.scale : spec.scale);
        switch (spec.id) {
            case ObjectiveId::ER: out.q += w * model.c; break;
            case ObjectiveId::ESG: out.q += w * model.esg; break;
            case ObjectiveId::V: out.H += w * (spec.half ? 1.0 : 2.0) * model.Q; break;
            default: throw ConfigError("scalar_quadratic: objective is not linear or quadratic");
        }
    }
    return out;
}

struct Candidate {
    VectorXd x;
    double bound = kInf;  // QP objective of the (possibly relaxed) problem
};

// Minimises the quadratic over the polyhedron with every coordinate outside
// `free` fixed at zero.
std::optional<Candidate> solve_on(const Quadratic& quad, const Polyhedron& poly, const std::vector<int>& free) {
    const Restriction r = restrict_polyhedron(poly, VectorXd::Zero(poly.n), free);
    if (r.infeasible) return std::nullopt;
    const int k = r.num_free;
    const int nv = k + r.n_aux;
    QpProblem qp;
    qp.H = MatrixXd::Zero(nv, nv);
    qp.q = VectorXd::Zero(nv);
    for (int a = 0; a < k; ++a) {
        qp.q[a] = quad.q[free[a]];
        for (int b = 0; b < k; ++b) qp.H(a, b) = quad.H(free[a], free[b]);
    }
    if (r.n_aux) qp.H.bottomRightCorner(r.n_aux, r.n_aux).diagonal().setConstant(1e-10);
    qp.E = r.E;
    qp.f = r.f;
    qp.C = r.C;
    qp.e = r.e;
    const QpResult res = solve_qp(qp);
    if (res.status == QpStatus::Infeasible) return std::nullopt;
    if (res.status != QpStatus::Optimal && res.kkt_residual > 1e-6) return std::nullopt;
    Candidate c;
    c.x = VectorXd::Zero(poly.n);
    for (int a = 0; a < k; ++a) c.x[free[a]] = res.w[a] < kSupportTolerance * 1e-2 ? 0.0 : res.w[a];
    c.bound = res.objective;
    return c;
}

struct Best {
    VectorXd x;
    double value = kInf;
    bool found = false;

    // Strictly lower value wins; within the tie tolerance the
    // lexicographically smaller support does.
    void offer(const VectorXd& cand, double v) {
        if (!found || v < value - 1e-9 * (1.0 + std::abs(value)) ||
            (ties(v, value) && support_of(cand) < support_of(x))) {
            x = cand;
            value = v;
            found = true;
        }
    }
};

Best enumerate_supports(const PortfolioObjectives& obj, const VectorXd& lambda, const Quadratic& quad,
                        const Polyhedron& poly, int s) {
    Best best;
    const int n = obj.dim();
    for (const SupportSet& J : all_supports(n, std::min(s, n))) {
        const auto c = solve_on(quad, poly, J.indices());
        if (!c) continue;
        best.offer(c->x, lambda.dot(obj.values(c->x)));
    }
    return best;
}

struct Node {
    double bound;
    long order;
    std::vector<int> in;
    std::vector<char> out;
    VectorXd x;
};

struct NodeAfter {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.order > b.order;
    }
};

std::vector<int> free_indices(const std::vector<int>& in, const std::vector<char>& out, int s) {
    if (static_cast<int>(in.size()) >= s) {
        std::vector<int> f = in;
        std::sort(f.begin(), f.end());
        return f;
    }
    std::vector<int> f;
    for (int i = 0; i < static_cast<int>(out.size()); ++i)
        if (!out[i]) f.push_back(i);
    return f;
}

Best branch_and_bound(const PortfolioObjectives& obj, const VectorXd& lambda, const Quadratic& quad,
                      const Polyhedron& poly, int s, long node_limit, bool& complete) {
    const int n = obj.dim();
    Best best;
    complete = true;
    std::priority_queue<Node, std::vector<Node>, NodeAfter> open;
    long order = 0;

    auto push = [&](std::vector<int> in, std::vector<char> out) {
        const auto c = solve_on(quad, poly, free_indices(in, out, s));
        if (!c) return;
        open.push(Node{c->bound, order++, std::move(in), std::move(out), c->x});
    };
    push({}, std::vector<char>(n, 0));

    long processed = 0;
    while (!open.empty()) {
        if (processed >= node_limit) {
            complete = false;
            break;
        }
        Node node = open.top();
        open.pop();
        ++processed;
        if (best.found) {
            // The bound is the QP value; compare on the same footing.
            const double inc = 0.5 * best.x.dot(quad.H * best.x) + quad.q.dot(best.x);
            if (node.bound > inc - 1e-9 * (1.0 + std::abs(inc)) && !ties(node.bound, inc)) continue;
        }
        SupportSet S = support_of(node.x);
        std::vector<int> merged = S.indices();
        merged.insert(merged.end(), node.in.begin(), node.in.end());
        const SupportSet U{merged};
        if (static_cast<int>(U.size()) <= s) {
            if (const auto leaf = solve_on(quad, poly, U.indices()))
                best.offer(leaf->x, lambda.dot(obj.values(leaf->x)));
            continue;
        }
        int branch = -1;
        for (int i = 0; i < n; ++i) {
            if (node.out[i] || std::find(node.in.begin(), node.in.end(), i) != node.in.end()) continue;
            if (node.x[i] <= kSupportTolerance) continue;
            if (branch < 0 || node.x[i] > node.x[branch]) branch = i;
        }
        if (branch < 0) continue;

        std::vector<int> in_child = node.in;
        in_child.push_back(branch);
        if (static_cast<int>(in_child.size()) < s) {
            // The relaxation only changes once the in-set is full.
            open.push(Node{node.bound, order++, std::move(in_child), node.out, node.x});
        } else {
            push(std::move(in_child), node.out);
        }
        std::vector<char> out_child = node.out;
        out_child[branch] = 1;
        push(node.in, std::move(out_child));
    }
    return best;
}

std::optional<VectorXd> random_feasible_start(const Polyhedron& poly, int n, int s, Rng& rng) {
    std::vector<int> idx(n);
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::iota(idx.begin(), idx.end(), 0);
        const int k = std::min(s, n);
        for (int a = 0; a < k; ++a) std::swap(idx[a], idx[a + static_cast<int>(rng.below(n - a))]);
        VectorXd x = VectorXd::Zero(n);
        double total = 0.0;
        for (int a = 0; a < k; ++a) total += (x[idx[a]] = -std::log(1.0 - rng.uniform()));
        x /= total;
        const SupportSet J{std::vector<int>(idx.begin(), idx.begin() + k)};
        if (auto p = project_restricted(poly, x, J)) return p;
    }
    return std::nullopt;
}

}  // namespace

ScalarSolution scalarize_solve(const PortfolioObjectives& obj, const VectorXd& lambda, const Polyhedron& poly, int s,
                               const ScalarizationOptions& options, std::size_t weight_index) {
    if (lambda.size() != obj.count()) throw ConfigError("scalarize_solve: weight length differs from objective count");
    if ((lambda.array() < 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-12)
        throw ConfigError("scalarize_solve: weights must be nonnegative and sum to one");
    const int n = obj.dim();
    ScalarSolution out;
    out.lambda = lambda;

    if (obj.is_convex_quadratic()) {
        const Quadratic quad = scalar_quadratic(obj, lambda);
        Best best;
        if (!options.force_branch_and_bound && binomial(n, std::min(s, n)) <= options.enumeration_budget) {
            best = enumerate_supports(obj, lambda, quad, poly, s);
            out.method = "enumeration";
            out.exact = true;
        } else {
            bool complete = true;
            best = branch_and_bound(obj, lambda, quad, poly, s, options.node_limit, complete);
            out.method = "branch_and_bound";
            out.exact = complete;
        }
        if (!best.found) throw InfeasibleError("scalarize_solve: no support admits a feasible portfolio");
        out.x = best.x;
    } else {
        const ScalarizedObjective scalar(obj, lambda);
        std::uint64_t mix = weight_index;
        Rng rng = Rng::stream(options.seed ^ splitmix64(mix), "scalarization_start");
        Best best;
        for (int start = 0; start < options.multistarts; ++start) {
            const auto x0 = random_feasible_start(poly, n, s, rng);
            if (!x0) continue;
            try {
                const DescentResult r = mospd(scalar, *x0, poly, s, options.mospd);
                if (is_feasible(r.x, poly, s, 1e-7)) best.offer(r.x, scalar.values(r.x)[0]);
            } catch (const NumericalError&) {
            }
        }
        if (!best.found) throw NumericalError("scalarize_solve: every multistart failed");
        out.x = best.x;
        out.method = "penalty_decomposition";
        out.exact = false;
    }
    out.F = obj.values(out.x);
    out.value = lambda.dot(out.F);
    return out;
}

ScalarizationFront scalarization_front(const PortfolioObjectives& obj, const Polyhedron& poly, int s,
                                       const std::vector<VectorXd>& grid, const ScalarizationOptions& options) {
    if (grid.empty()) throw ConfigError("scalarization_front: empty weight grid");
    const std::size_t W = grid.size();
    std::vector<std::optional<ScalarSolution>> solved(W);
    std::vector<std::string> errors(W);

    std::atomic<std::size_t> next{0};
    const Stopwatch clock;
    auto worker = [&] {
        for (std::size_t w; (w = next.fetch_add(1)) < W;) {
            if (clock.exceeded(options.budget, static_cast<long>(w))) {
                errors[w] = "budget exhausted";
                continue;
            }
            try {
                solved[w] = scalarize_solve(obj, grid[w], poly, s, options, w);
            } catch (const Error& e) {
                errors[w] = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(W)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ScalarizationFront out;
    for (std::size_t w = 0; w < W; ++w) {
        if (solved[w]) out.solutions.push_back(std::move(*solved[w]));
        else if (errors[w] != "budget exhausted") out.failures.push_back("weight " + std::to_string(w) + ": " + errors[w]);
    }
    std::vector<VectorXd> Fs;
    for (const auto& sol : out.solutions) Fs.push_back(sol.F);
    for (std::size_t i : nondominated_filter(Fs)) {
        const ScalarSolution& sol = out.solutions[i];
        EvaluatedPoint p{sol.x, sol.F, first_super_support(sol.x, s)};
        if (const auto id = out.front.insert(std::move(p), "scal")) out.lambda_of[*id] = sol.lambda;
    }
    return out;
}

}  // namespace sparsefront
