#include "sparsefront/evolutionary.hpp"

#include "sparsefront/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparsefront {

std::vector<Member> Population::first_front() const {
    std::vector<Member> out;
    for (const auto& m : members)
        if (m.rank == 0) out.push_back(m);
    return out;
}

void GaParams::validate() const {
    if (N < 2) throw ConfigError("population size must be at least 2");
    if (crossover_prob < 0.0 || crossover_prob > 1.0) throw ConfigError("crossover probability outside [0,1]");
    if (mutation_prob > 1.0) throw ConfigError("mutation probability above 1");
}

std::vector<VectorXd> initial_points(int n, int s, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, "initial_population");
    std::vector<VectorXd> out;
    out.reserve(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        VectorXd e = VectorXd::Zero(n);
        e[i] = 1.0;
        out.push_back(normalize_project(e, s));
    }
    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) {
        std::iota(idx.begin(), idx.end(), 0);
        for (int a = 0; a < s; ++a) std::swap(idx[a], idx[a + static_cast<int>(rng.below(n - a))]);
        VectorXd x = VectorXd::Zero(n);
        for (int a = 0; a < s; ++a) x[idx[a]] = -std::log(1.0 - rng.uniform());
        out.push_back(normalize_project(x, s));
    }
    return out;
}

namespace {

Member evaluate(const MultiObjective& obj, const Polyhedron& poly, VectorXd x) {
    Member m;
    m.violation = linear_violation(x, poly);
    try {
        m.F = obj.values(x);
    } catch (const NumericalError&) {
        m.F = VectorXd::Constant(obj.count(), kInf);
        m.violation = std::max(m.violation, 1e300);
    }
    m.x = std::move(x);
    return m;
}

constexpr double kViolationTol = 1e-9;

std::vector<std::vector<std::size_t>> sort_fronts(const std::vector<Member>& pop) {
    const std::size_t N = pop.size();
    std::vector<std::vector<std::size_t>> dominated_by(N);
    std::vector<int> count(N, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = 0; q < N; ++q) {
            if (p == q) continue;
            if (constrained_dominates(pop[p], pop[q])) dominated_by[p].push_back(q);
            else if (constrained_dominates(pop[q], pop[p])) ++count[p];
        }
    for (std::size_t p = 0; p < N; ++p)
        if (count[p] == 0) fronts[0].push_back(p);
    for (std::size_t f = 0; f < fronts.size() && !fronts[f].empty(); ++f) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[f])
            for (std::size_t q : dominated_by[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        if (!next.empty()) fronts.push_back(std::move(next));
    }
    return fronts;
}

void assign_crowding(std::vector<Member>& pop, const std::vector<std::size_t>& front) {
    std::vector<VectorXd> Fs;
    for (std::size_t i : front) Fs.push_back(pop[i].F);
    const std::vector<double> cd = crowding_distance(Fs);
    for (std::size_t a = 0; a < front.size(); ++a) pop[front[a]].crowding = cd[a];
}

std::vector<Member> select_survivors(std::vector<Member> pool, int N) {
    const auto fronts = sort_fronts(pool);
    std::vector<Member> out;
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        for (std::size_t i : fronts[f]) pool[i].rank = static_cast<int>(f);
        assign_crowding(pool, fronts[f]);
        if (out.size() + fronts[f].size() <= static_cast<std::size_t>(N)) {
            for (std::size_t i : fronts[f]) out.push_back(pool[i]);
            continue;
        }
        std::vector<std::size_t> last = fronts[f];
        std::stable_sort(last.begin(), last.end(),
                         [&](std::size_t a, std::size_t b) { return pool[a].crowding > pool[b].crowding; });
        for (std::size_t i : last) {
            if (out.size() >= static_cast<std::size_t>(N)) break;
            out.push_back(pool[i]);
        }
        break;
    }
    // Ranks and crowding are recomputed on the survivors.
    rank_population(out);
    return out;
}

const Member& tournament(const std::vector<Member>& pop, Rng& rng) {
    const Member& a = pop[rng.below(pop.size())];
    const Member& b = pop[rng.below(pop.size())];
    if (a.rank != b.rank) return a.rank < b.rank ? a : b;
    return b.crowding > a.crowding ? b : a;
}

// Simulated binary crossover on [0, 1] coordinates.
void sbx(VectorXd& c1, VectorXd& c2, double eta, Rng& rng) {
    for (Eigen::Index i = 0; i < c1.size(); ++i) {
        if (rng.uniform() > 0.5) continue;
        const double y1 = std::min(c1[i], c2[i]);
        const double y2 = std::max(c1[i], c2[i]);
        if (y2 - y1 < 1e-14) continue;
        const double u = rng.uniform();
        auto child = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            const double betaq = u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                                  : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
            return betaq;
        };
        const double bq1 = child(1.0 + 2.0 * y1 / (y2 - y1));
        const double bq2 = child(1.0 + 2.0 * (1.0 - y2) / (y2 - y1));
        double v1 = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), 0.0, 1.0);
        double v2 = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), 0.0, 1.0);
        if (rng.uniform() <= 0.5) std::swap(v1, v2);
        c1[i] = v1;
        c2[i] = v2;
    }
}

void polynomial_mutation(VectorXd& x, double prob, double eta, Rng& rng) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (rng.uniform() > prob) continue;
        const double y = x[i];
        const double d1 = y, d2 = 1.0 - y;
        const double u = rng.uniform();
        const double pw = 1.0 / (eta + 1.0);
        double dq;
        if (u < 0.5) {
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
            dq = std::pow(val, pw) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            dq = 1.0 - std::pow(val, pw);
        }
        x[i] = std::clamp(y + dq, 0.0, 1.0);
    }
}

Population run_generations(const MultiObjective& obj, const Polyhedron& poly, int s, const GaParams& params,
                           const NsmaParams* memetic) {
    params.validate();
    const int n = obj.dim();
    Population pop = initial_population(obj, poly, s, params.seed);
    if (static_cast<int>(pop.members.size()) > params.N) pop.members = select_survivors(pop.members, params.N);

    Rng rng = Rng::stream(params.seed, "nsga2_generations");
    const double pm = params.mutation_prob < 0.0 ? 1.0 / n : params.mutation_prob;
    Stopwatch clock;
    for (long gen = 0; !clock.exceeded(params.budget, gen); ++gen) {
        std::vector<Member> offspring;
        offspring.reserve(params.N);
        while (static_cast<int>(offspring.size()) < params.N) {
            VectorXd c1 = tournament(pop.members, rng).x;
            VectorXd c2 = tournament(pop.members, rng).x;
            if (rng.uniform() <= params.crossover_prob) sbx(c1, c2, params.sbx_eta, rng);
            polynomial_mutation(c1, pm, params.mutation_eta, rng);
            polynomial_mutation(c2, pm, params.mutation_eta, rng);
            for (VectorXd* c : {&c1, &c2}) {
                if (static_cast<int>(offspring.size()) >= params.N) break;
                offspring.push_back(evaluate(obj, poly, normalize_project(*c, s)));
            }
        }
        if (memetic && memetic->refine_steps > 0 && memetic->refine_every > 0 && (gen + 1) % memetic->refine_every == 0) {
            MoihtParams iht = memetic->moiht;
            iht.max_iter = memetic->refine_steps;
            for (Member& child : offspring) {
                if (child.violation > kViolationTol) continue;
                try {
                    DescentResult r = moiht(obj, child.x, poly, s, iht);
                    child = evaluate(obj, poly, std::move(r.x));
                } catch (const Error&) {
                }
            }
        }
        std::vector<Member> pool = std::move(pop.members);
        pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
        pop.members = select_survivors(std::move(pool), params.N);
    }
    return pop;
}

}  // namespace

bool constrained_dominates(const Member& a, const Member& b) {
    const bool fa = a.violation <= kViolationTol;
    const bool fb = b.violation <= kViolationTol;
    if (fa && !fb) return true;
    if (!fa && fb) return false;
    if (!fa && !fb) return a.violation < b.violation;
    return dominates(a.F, b.F);
}

void rank_population(std::vector<Member>& members) {
    const auto fronts = sort_fronts(members);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        for (std::size_t i : fronts[f]) members[i].rank = static_cast<int>(f);
        assign_crowding(members, fronts[f]);
    }
}

Population initial_population(const MultiObjective& obj, const Polyhedron& poly, int s, std::uint64_t seed) {
    Population pop;
    for (VectorXd& x : initial_points(obj.dim(), s, seed)) pop.members.push_back(evaluate(obj, poly, std::move(x)));
    rank_population(pop.members);
    return pop;
}

Population nsga2_run(const MultiObjective& obj, const Polyhedron& poly, int s, const GaParams& params) {
    return run_generations(obj, poly, s, params, nullptr);
}

Population nsma_run(const MultiObjective& obj, const Polyhedron& poly, int s, const GaParams& params,
                    const NsmaParams& memetic) {
    return run_generations(obj, poly, s, params, &memetic);
}

}  // namespace sparsefront
