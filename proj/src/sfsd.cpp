#include "sparsefront/sfsd.hpp"

#include <algorithm>
#include <numeric>

namespace sparsefront {

StepResult armijo_explore(const MultiObjective& obj, const VectorXd& z, const VectorXd& v,
                          const std::vector<VectorXd>& same_support_front, const ArmijoParams& params) {
    StepResult out;
    double alpha = 1.0;
    for (int h = 0; h <= params.h_max; ++h, alpha *= params.delta) {
        VectorXd trial = z + alpha * v;
        clean_weights(trial);
        VectorXd Ft;
        try {
            Ft = obj.values(trial);
        } catch (const NumericalError&) {
            continue;
        }
        const bool ok = std::all_of(same_support_front.begin(), same_support_front.end(), [&](const VectorXd& Fy) {
            return (Ft.array() < Fy.array()).any();
        });
        if (ok) {
            out.alpha = alpha;
            out.F = std::move(Ft);
            out.found = true;
            return out;
        }
    }
    return out;
}

std::vector<std::vector<int>> objective_subsets(int m) {
    std::vector<std::vector<int>> out;
    for (int k = 1; k <= m; ++k)
        for (const SupportSet& sub : all_supports(m, k)) out.push_back(sub.indices());
    return out;
}

namespace {

std::vector<std::size_t> processing_order(const FrontList& list) {
    const auto& entries = list.entries();
    const std::size_t N = entries.size();
    std::vector<char> nondominated(N, 0);
    for (std::size_t i : nondominated_filter(list.objective_vectors())) nondominated[i] = 1;

    std::vector<double> crowd(N, kInf);
    for (const SupportSet& J : list.supports()) {
        std::vector<std::size_t> members;
        std::vector<VectorXd> Fs;
        for (std::size_t i = 0; i < N; ++i)
            if (entries[i].point.J == J) {
                members.push_back(i);
                Fs.push_back(entries[i].point.F);
            }
        const std::vector<double> cd = crowding_distance(Fs);
        for (std::size_t a = 0; a < members.size(); ++a) crowd[members[a]] = cd[a];
    }

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (nondominated[a] != nondominated[b]) return nondominated[a] > nondominated[b];
        return crowd[a] > crowd[b];
    });
    std::vector<std::size_t> ids;
    ids.reserve(N);
    for (std::size_t i : order) ids.push_back(entries[i].id);
    return ids;
}

double crowding_in_group(const FrontList& list, std::size_t id, const SupportSet& J) {
    const auto group = list.group(J);
    std::vector<VectorXd> Fs;
    std::size_t pos = 0;
    for (std::size_t a = 0; a < group.size(); ++a) {
        if (group[a]->id == id) pos = a;
        Fs.push_back(group[a]->point.F);
    }
    return crowding_distance(Fs)[pos];
}

std::vector<VectorXd> group_values(const FrontList& list, const SupportSet& J) {
    std::vector<VectorXd> out;
    for (const auto* e : list.group(J)) out.push_back(e->point.F);
    return out;
}

bool pairs_with(const VectorXd& x, const SupportSet& J, int s) {
    return static_cast<int>(J.size()) == s && J.includes(support_of(x));
}

}  // namespace

SfsdResult sfsd_run(const FrontList& X0, const MultiObjective& obj, const Polyhedron& poly, int s,
                    const SfsdParams& params) {
    SfsdResult out;
    for (const auto& e : X0.entries()) {
        const FeasibilityReport rep = is_feasible(e.point.x, poly, s, 1e-7);
        if (!rep || !pairs_with(e.point.x, e.point.J, s)) {
            out.rejected.push_back("entry " + std::to_string(e.id) + ": " +
                                   (rep ? std::string("support not contained in a size-s J") : rep.to_string()));
            continue;
        }
        EvaluatedPoint p = e.point;
        p.F = obj.values(p.x);
        out.front.insert(std::move(p), e.origin);
    }
    if (out.front.empty()) throw ConfigError("sfsd: every initial point was rejected");

    const std::vector<std::vector<int>> subsets = objective_subsets(obj.count());
    Stopwatch clock;
    long k = 0;
    bool all_stationary = false;
    for (; !clock.exceeded(params.budget, k); ++k) {
        FrontList& X = out.front;
        bool changed = false;
        all_stationary = true;

        for (std::size_t cid : processing_order(X)) {
            const FrontList::Entry* cur = X.find(cid);
            if (!cur) continue;
            const VectorXd xc = cur->point.x;
            const VectorXd Fc = cur->point.F;
            const SupportSet J = cur->point.J;
            const std::string origin = cur->origin;

            const DirectionResult common = common_direction(xc, J, obj.jacobian(xc), poly);
            X.set_theta(cid, common.theta);

            std::size_t zid = cid;
            VectorXd z = xc;
            if (common.is_descent(params.theta_tol)) {
                all_stationary = false;
                const StepResult step = armijo_full(obj, xc, common.v, common.theta, Fc, params.armijo);
                if (step.found) {
                    z = xc + step.alpha * common.v;
                    clean_weights(z);
                    const auto id = X.insert({z, step.F, J}, origin);
                    changed = true;
                    if (!id) continue;
                    zid = *id;
                    out.lineage.parent_of[zid] = {cid, k};
                }
            }

            if (crowding_in_group(X, zid, J) < params.crowding_gate) continue;
            const MatrixXd Gz = obj.jacobian(z);
            for (const auto& I : subsets) {
                if (!X.contains(zid)) break;
                const DirectionResult partial = partial_direction(z, J, Gz, I, poly);
                if (static_cast<int>(I.size()) == obj.count()) X.set_theta(zid, partial.theta);
                if (!partial.is_descent(params.theta_tol)) continue;
                const StepResult step = armijo_explore(obj, z, partial.v, group_values(X, J), params.armijo);
                if (!step.found) continue;
                VectorXd zhat = z + step.alpha * partial.v;
                clean_weights(zhat);
                if (const auto id = X.insert({std::move(zhat), step.F, J}, origin)) {
                    out.lineage.parent_of[*id] = {cid, k};
                    changed = true;
                }
            }
        }
        if (!changed) {
            out.natural_termination = true;
            ++k;
            break;
        }
    }
    out.iterations = k;
    out.all_stationary = out.natural_termination && all_stationary;
    return out;
}

FrontList initial_front(const std::vector<VectorXd>& points, const std::vector<std::string>& origins,
                        const MultiObjective& obj, const Polyhedron& poly, int s) {
    std::vector<EvaluatedPoint> feasible;
    std::vector<std::string> tags;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!is_feasible(points[i], poly, s, 1e-7)) continue;
        EvaluatedPoint p;
        p.x = points[i];
        try {
            p.F = obj.values(p.x);
        } catch (const NumericalError&) {
            continue;
        }
        p.J = first_super_support(p.x, s);
        feasible.push_back(std::move(p));
        tags.push_back(i < origins.size() ? origins[i] : std::string());
    }
    FrontList out;
    if (feasible.empty()) return out;
    std::vector<VectorXd> Fs;
    for (const auto& p : feasible) Fs.push_back(p.F);
    for (std::size_t i : nondominated_filter(Fs)) out.insert(feasible[i], tags[i]);
    return out;
}

}  // namespace sparsefront
