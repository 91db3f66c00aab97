#include "sparsefront/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace sparsefront {

SupportSet::SupportSet(std::vector<int> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
}

bool SupportSet::contains(int i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

bool SupportSet::includes(const SupportSet& other) const {
    return std::includes(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end());
}

std::string SupportSet::to_string() const {
    std::string out;
    for (std::size_t k = 0; k < idx_.size(); ++k) {
        if (k) out += ';';
        out += std::to_string(idx_[k]);
    }
    return out;
}

SupportSet SupportSet::parse(const std::string& text) {
    std::vector<int> idx;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        try {
            idx.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw DataError("bad support index '" + tok + "'");
        }
    }
    return SupportSet(std::move(idx));
}

SupportSet support_of(const VectorXd& x, double tol) {
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > tol) idx.push_back(static_cast<int>(i));
    return SupportSet(std::move(idx));
}

namespace {

std::vector<int> zero_indices(const VectorXd& x, const SupportSet& S) {
    std::vector<int> zeros;
    for (int i = 0; i < static_cast<int>(x.size()); ++i)
        if (!S.contains(i)) zeros.push_back(i);
    return zeros;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

SupportSet first_super_support(const VectorXd& x, int s, double tol) {
    SupportSet S = support_of(x, tol);
    if (static_cast<int>(S.size()) > s)
        throw InfeasibleError("support of size " + std::to_string(S.size()) + " exceeds s=" + std::to_string(s));
    std::vector<int> idx = S.indices();
    for (int z : zero_indices(x, S)) {
        if (static_cast<int>(idx.size()) >= s) break;
        idx.push_back(z);
    }
    return SupportSet(std::move(idx));
}

std::vector<SupportSet> super_supports(const VectorXd& x, int s, double tol) {
    SupportSet S = support_of(x, tol);
    const int have = static_cast<int>(S.size());
    if (have > s)
        throw InfeasibleError("support of size " + std::to_string(have) + " exceeds s=" + std::to_string(s));
    const std::vector<int> zeros = zero_indices(x, S);
    const int need = s - have;
    if (need > static_cast<int>(zeros.size()))
        throw InfeasibleError("s exceeds the dimension of x");
    if (binomial(static_cast<int>(zeros.size()), need) > static_cast<double>(kMaxSuperSupports))
        return {first_super_support(x, s, tol)};

    std::vector<SupportSet> out;
    std::vector<int> pick(need);
    std::iota(pick.begin(), pick.end(), 0);
    const int z = static_cast<int>(zeros.size());
    while (true) {
        std::vector<int> idx = S.indices();
        for (int p : pick) idx.push_back(zeros[p]);
        out.emplace_back(std::move(idx));
        int k = need - 1;
        while (k >= 0 && pick[k] == z - need + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int j = k + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

Relation compare(const VectorXd& a, const VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compare: objective vectors differ in length");
    bool a_better = false, b_better = false;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) a_better = true;
        else if (b[j] < a[j]) b_better = true;
    }
    if (a_better && !b_better) return Relation::Dominates;
    if (b_better && !a_better) return Relation::Dominated;
    if (!a_better && !b_better) return Relation::Equal;
    return Relation::Incomparable;
}

bool dominates(const VectorXd& a, const VectorXd& b) { return compare(a, b) == Relation::Dominates; }

std::vector<std::size_t> nondominated_filter(const std::vector<VectorXd>& points) {
    if (points.empty()) throw std::invalid_argument("nondominated_filter: empty input");
    const std::size_t N = points.size();
    const Eigen::Index m = points.front().size();
    std::vector<std::size_t> keep;

    if (m == 2) {
        // Sort by (f1, f2); a point survives iff its f2 is at most the best
        // f2 seen among strictly smaller-f1 points, handling equal-f1 runs.
        std::vector<std::size_t> order(N);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
            return points[a][1] < points[b][1];
        });
        double best_f2 = kInf;
        std::size_t k = 0;
        while (k < N) {
            std::size_t run_end = k;
            while (run_end < N && points[order[run_end]][0] == points[order[k]][0]) ++run_end;
            const double run_min = points[order[k]][1];
            for (std::size_t r = k; r < run_end; ++r) {
                const double f2 = points[order[r]][1];
                // dominated by a smaller-f1 point with f2 <= ours, or by a same-f1 point with smaller f2
                if (f2 >= best_f2 || f2 > run_min) continue;
                keep.push_back(order[r]);
            }
            best_f2 = std::min(best_f2, run_min);
            k = run_end;
        }
        std::sort(keep.begin(), keep.end());
        return keep;
    }

    for (std::size_t i = 0; i < N; ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < N && !dominated; ++j)
            if (j != i && dominates(points[j], points[i])) dominated = true;
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

std::vector<double> crowding_distance(const std::vector<VectorXd>& front) {
    const std::size_t N = front.size();
    std::vector<double> dist(N, 0.0);
    if (N < 3) {
        std::fill(dist.begin(), dist.end(), kInf);
        return dist;
    }
    const Eigen::Index m = front.front().size();
    std::vector<std::size_t> order(N);
    for (Eigen::Index j = 0; j < m; ++j) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][j] < front[b][j]; });
        const double lo = front[order.front()][j];
        const double hi = front[order.back()][j];
        dist[order.front()] = kInf;
        dist[order.back()] = kInf;
        const double range = hi - lo;
        if (range <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < N; ++k)
            dist[order[k]] += (front[order[k + 1]][j] - front[order[k - 1]][j]) / range;
    }
    return dist;
}

std::optional<std::size_t> FrontList::insert(EvaluatedPoint p, std::string origin) {
    if (!accepts(p.F, p.J)) return std::nullopt;
    std::erase_if(entries_, [&](const Entry& e) { return e.point.J == p.J && dominates(p.F, e.point.F); });
    Entry e;
    e.id = next_id_++;
    e.point = std::move(p);
    e.origin = std::move(origin);
    entries_.push_back(std::move(e));
    return entries_.back().id;
}

bool FrontList::accepts(const VectorXd& F, const SupportSet& J) const {
    for (const auto& e : entries_) {
        if (e.point.J != J) continue;
        const Relation r = compare(e.point.F, F);
        if (r == Relation::Dominates || r == Relation::Equal) return false;
    }
    return true;
}

bool FrontList::contains(std::size_t id) const { return find(id) != nullptr; }

const FrontList::Entry* FrontList::find(std::size_t id) const {
    for (const auto& e : entries_)
        if (e.id == id) return &e;
    return nullptr;
}

void FrontList::set_theta(std::size_t id, double theta) {
    for (auto& e : entries_)
        if (e.id == id) e.theta = theta;
}

std::vector<const FrontList::Entry*> FrontList::group(const SupportSet& J) const {
    std::vector<const Entry*> out;
    for (const auto& e : entries_)
        if (e.point.J == J) out.push_back(&e);
    return out;
}

std::vector<SupportSet> FrontList::supports() const {
    std::vector<SupportSet> out;
    for (const auto& e : entries_) out.push_back(e.point.J);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VectorXd> FrontList::objective_vectors() const {
    std::vector<VectorXd> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.point.F);
    return out;
}

std::vector<FrontList::Entry> FrontList::global_front() const {
    if (entries_.empty()) return {};
    std::vector<Entry> out;
    for (std::size_t i : nondominated_filter(objective_vectors())) out.push_back(entries_[i]);
    return out;
}

}  // namespace sparsefront
