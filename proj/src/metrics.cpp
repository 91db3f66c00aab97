#include "sparsefront/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sparsefront {

std::vector<double> purity(const std::vector<Front>& fronts) {
    std::vector<VectorXd> all;
    for (const auto& f : fronts) all.insert(all.end(), f.begin(), f.end());
    std::vector<double> out;
    out.reserve(fronts.size());
    for (const auto& f : fronts) {
        if (f.empty()) {
            out.push_back(0.0);
            continue;
        }
        std::size_t kept = 0;
        for (const auto& p : f) {
            const bool beaten = std::any_of(all.begin(), all.end(), [&](const VectorXd& q) { return dominates(q, p); });
            if (!beaten) ++kept;
        }
        out.push_back(static_cast<double>(kept) / static_cast<double>(f.size()));
    }
    return out;
}

double gamma_spread(const Front& front) {
    if (front.size() < 2) return kInf;
    Front pts;
    for (const auto& p : front) {
        const bool dup = std::any_of(pts.begin(), pts.end(),
                                     [&](const VectorXd& q) { return (p - q).cwiseAbs().maxCoeff() <= 1e-9; });
        if (!dup) pts.push_back(p);
    }
    if (pts.size() < 2) return 0.0;
    const Eigen::Index m = pts.front().size();
    double gamma = 0.0;
    std::vector<std::size_t> order(pts.size());
    for (Eigen::Index j = 0; j < m; ++j) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a][j] < pts[b][j]; });
        for (std::size_t k = 1; k < order.size(); ++k)
            gamma = std::max(gamma, (pts[order[k]] - pts[order[k - 1]]).cwiseAbs().maxCoeff());
    }
    return gamma;
}

namespace {

double hv_recursive(std::vector<VectorXd> pts, const VectorXd& ref, int m) {
    if (pts.empty()) return 0.0;
    if (m == 1) {
        double best = ref[0];
        for (const auto& p : pts) best = std::min(best, p[0]);
        return ref[0] - best;
    }
    if (m == 2) {
        std::sort(pts.begin(), pts.end(), [](const VectorXd& a, const VectorXd& b) {
            return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
        });
        double area = 0.0, y_prev = ref[1];
        for (const auto& p : pts) {
            if (p[1] >= y_prev) continue;
            area += (ref[0] - p[0]) * (y_prev - p[1]);
            y_prev = p[1];
        }
        return area;
    }
    // Slice along the last objective: between consecutive levels the
    // dominated region is the (m-1)-dimensional volume of the points below.
    const int last = m - 1;
    std::sort(pts.begin(), pts.end(), [last](const VectorXd& a, const VectorXd& b) { return a[last] < b[last]; });
    double volume = 0.0;
    std::vector<VectorXd> active;
    const VectorXd sub_ref = ref.head(last);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        active.push_back(pts[k].head(last));
        const double next = k + 1 < pts.size() ? pts[k + 1][last] : ref[last];
        const double height = next - pts[k][last];
        if (height <= 0.0) continue;
        std::vector<VectorXd> filtered;
        for (std::size_t i : nondominated_filter(active)) filtered.push_back(active[i]);
        volume += height * hv_recursive(std::move(filtered), sub_ref, last);
    }
    return volume;
}

}  // namespace

double hypervolume(const Front& front, const VectorXd& reference) {
    std::vector<VectorXd> pts;
    for (const auto& p : front)
        if ((p.array() < reference.array()).all()) pts.push_back(p);
    return hv_recursive(std::move(pts), reference, static_cast<int>(reference.size()));
}

VectorXd reference_point(const std::vector<Front>& fronts, double margin) {
    VectorXd lo, hi;
    for (const auto& f : fronts)
        for (const auto& p : f) {
            if (lo.size() == 0) {
                lo = hi = p;
                continue;
            }
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    if (lo.size() == 0) throw ConfigError("reference_point: no points");
    return hi + margin * (hi - lo);
}

double recall(const std::vector<SupportSet>& solver, const std::vector<SupportSet>& reference) {
    const std::set<SupportSet> ref(reference.begin(), reference.end());
    if (ref.empty()) throw ConfigError("recall: empty reference support list");
    const std::set<SupportSet> mine(solver.begin(), solver.end());
    std::size_t hit = 0;
    for (const auto& J : ref)
        if (mine.count(J)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(ref.size());
}

std::vector<SupportSet> ReferenceFront::supports() const {
    std::set<SupportSet> s;
    for (const auto& p : points) s.insert(p.support);
    return {s.begin(), s.end()};
}

Front ReferenceFront::objective_vectors() const {
    Front out;
    for (const auto& p : points) out.push_back(p.F);
    return out;
}

ReferenceFront build_reference(const std::vector<std::vector<ReferencePoint>>& runs) {
    std::vector<ReferencePoint> all;
    for (const auto& r : runs) all.insert(all.end(), r.begin(), r.end());
    Front Fs;
    for (const auto& p : all) Fs.push_back(p.F);
    ReferenceFront out;
    for (std::size_t i : nondominated_filter(Fs)) {
        const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const ReferencePoint& q) {
            return q.support == all[i].support && (q.F - all[i].F).cwiseAbs().maxCoeff() <= 1e-12;
        });
        if (!dup) out.points.push_back(all[i]);
    }
    return out;
}

std::vector<std::vector<ProfileStep>> performance_profile(const std::vector<std::vector<double>>& values,
                                                          bool higher_is_better) {
    const std::size_t S = values.size();
    std::size_t P = 0;
    for (const auto& row : values) P = std::max(P, row.size());
    auto cell = [&](std::size_t s, std::size_t p) {
        return p < values[s].size() && std::isfinite(values[s][p]) ? values[s][p] : std::nan("");
    };

    std::vector<std::vector<double>> ratios(S, std::vector<double>(P, kInf));
    for (std::size_t p = 0; p < P; ++p) {
        double best = std::nan("");
        for (std::size_t s = 0; s < S; ++s) {
            const double v = cell(s, p);
            if (std::isnan(v)) continue;
            if (std::isnan(best) || (higher_is_better ? v > best : v < best)) best = v;
        }
        if (std::isnan(best)) continue;
        for (std::size_t s = 0; s < S; ++s) {
            const double v = cell(s, p);
            if (std::isnan(v)) continue;
            if (v == best) {
                ratios[s][p] = 1.0;
                continue;
            }
            const double num = higher_is_better ? best : v;
            const double den = higher_is_better ? v : best;
            ratios[s][p] = den > 0.0 && num > 0.0 ? num / den : kInf;
        }
    }

    std::vector<std::vector<ProfileStep>> curves(S);
    for (std::size_t s = 0; s < S; ++s) {
        std::vector<double> r = ratios[s];
        std::sort(r.begin(), r.end());
        auto fraction_at = [&](double tau) {
            const auto cnt = std::upper_bound(r.begin(), r.end(), tau) - r.begin();
            return P ? static_cast<double>(cnt) / static_cast<double>(P) : 0.0;
        };
        curves[s].push_back({1.0, fraction_at(1.0)});
        for (double tau : r) {
            if (!std::isfinite(tau) || tau <= 1.0) continue;
            if (curves[s].back().tau == tau) continue;
            curves[s].push_back({tau, fraction_at(tau)});
        }
    }
    return curves;
}

}  // namespace sparsefront
