#include "test_util.hpp"

#include <doctest.h>

#include <set>

using namespace sparsefront;
using testutil::basis;

namespace {

struct Setup {
    ProblemInstance inst;
    PortfolioObjectives obj;
    Polyhedron poly;
};

Setup setup(int n, int s, std::uint64_t seed) {
    ProblemInstance inst = testutil::mean_variance_instance("ga", n, s, seed);
    PortfolioObjectives obj = inst.make_objectives();
    Polyhedron poly = inst.make_polyhedron();
    return {std::move(inst), std::move(obj), std::move(poly)};
}

GaParams params(int N, long generations, std::uint64_t seed) {
    GaParams p;
    p.N = N;
    p.seed = seed;
    p.budget = Budget::iterations_only(generations);
    return p;
}

Front rank_zero(const Population& pop) {
    Front F;
    for (const Member& m : pop.first_front()) F.push_back(m.F);
    return F;
}

bool same_population(const Population& a, const Population& b) {
    if (a.members.size() != b.members.size()) return false;
    for (std::size_t i = 0; i < a.members.size(); ++i)
        if (a.members[i].x != b.members[i].x || a.members[i].F != b.members[i].F) return false;
    return true;
}

}  // namespace

TEST_CASE("initial points hold the basis and random sparse portfolios") {
    const auto pts = initial_points(3, 1, 5);
    REQUIRE(pts.size() == 6);
    for (int i = 0; i < 3; ++i) CHECK(pts[i] == basis(3, i));
    for (const VectorXd& x : pts) CHECK(is_feasible(x, simplex_polyhedron(3), 1));
    CHECK(initial_points(3, 1, 5) == pts);
    const auto wide = initial_points(8, 3, 5);
    for (std::size_t k = 8; k < wide.size(); ++k) CHECK(support_of(wide[k]).size() == 3);
}

TEST_CASE("zero generations leave the initial population") {
    const Setup S = setup(6, 2, 1);
    const Population init = initial_population(S.obj, S.poly, 2, 3);
    const Population run = nsga2_run(S.obj, S.poly, 2, params(100, 0, 3));
    CHECK(same_population(init, run));
}

TEST_CASE("nsga2 keeps the whole toy feasible set") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron P = inst.make_polyhedron();
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Population pop = nsga2_run(obj, P, 1, params(12, 5, seed));
        int found = 0;
        for (int i = 0; i < 3; ++i) {
            const VectorXd F = obj.values(basis(3, i));
            for (const Member& m : pop.first_front())
                if ((m.F - F).cwiseAbs().maxCoeff() < 1e-12) {
                    ++found;
                    break;
                }
        }
        if (found == 3) ++hits;
        for (const Member& m : pop.members) CHECK(is_feasible(m.x, P, 1));
    }
    CHECK(hits >= 99);
}

TEST_CASE("runs are deterministic per seed") {
    const Setup S = setup(8, 3, 2);
    CHECK(same_population(nsga2_run(S.obj, S.poly, 3, params(20, 4, 7)), nsga2_run(S.obj, S.poly, 3, params(20, 4, 7))));
    NsmaParams mem;
    mem.refine_every = 1;
    mem.moiht.L = 50.0;
    CHECK(same_population(nsma_run(S.obj, S.poly, 3, params(20, 3, 7), mem),
                          nsma_run(S.obj, S.poly, 3, params(20, 3, 7), mem)));
}

TEST_CASE("nsma without refinement steps is nsga2") {
    const Setup S = setup(8, 3, 3);
    NsmaParams mem;
    mem.refine_steps = 0;
    CHECK(same_population(nsga2_run(S.obj, S.poly, 3, params(20, 6, 11)),
                          nsma_run(S.obj, S.poly, 3, params(20, 6, 11), mem)));
}

TEST_CASE("members stay sparse and on the simplex") {
    const Setup S = setup(10, 3, 4);
    NsmaParams mem;
    mem.refine_every = 2;
    Rng rng(0);
    mem.moiht.L = default_moiht_L(S.obj, 3, rng);
    for (const Population& pop : {nsga2_run(S.obj, S.poly, 3, params(30, 6, 1)),
                                  nsma_run(S.obj, S.poly, 3, params(30, 6, 1), mem)})
        for (const Member& m : pop.members) CHECK(is_feasible(m.x, S.poly, 3));
}

TEST_CASE("rank-zero hypervolume is nondecreasing while the first front fits") {
    // Crowding truncation of an oversized first front can shed volume. With
    // s = 1 the feasible set is the n vertices, so the first front always fits.
    const Setup S = setup(12, 1, 5);
    const Population start = nsga2_run(S.obj, S.poly, 1, params(30, 0, 13));
    VectorXd ref = VectorXd::Constant(2, -kInf);
    for (const Member& m : start.members) ref = ref.cwiseMax(m.F);
    ref.array() += 1.0;
    double last = -1.0;
    for (long g = 0; g <= 8; ++g) {
        const Population pop = nsga2_run(S.obj, S.poly, 1, params(30, g, 13));
        std::set<std::vector<double>> distinct;
        for (const Member& m : pop.first_front()) distinct.insert({m.F.data(), m.F.data() + m.F.size()});
        REQUIRE(distinct.size() < 30);
        const double hv = hypervolume(rank_zero(pop), ref);
        CHECK(hv >= last - 1e-12);
        last = hv;
    }
}

TEST_CASE("memetic refinement moves the population closer to L-stationarity") {
    double ga_total = 0.0, memetic_total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Setup S = setup(8, 2, 100 + seed);
        Rng rng(seed);
        NsmaParams mem;
        mem.refine_every = 1;
        mem.refine_steps = 1;
        mem.moiht.L = default_moiht_L(S.obj, 2, rng);
        auto mean_theta = [&](const Population& pop) {
            double total = 0.0;
            for (const Member& m : pop.members)
                total += l_stationary_direction(m.x, mem.moiht.L, S.obj.jacobian(m.x), S.poly, 2).theta;
            return total / static_cast<double>(pop.members.size());
        };
        ga_total += mean_theta(nsga2_run(S.obj, S.poly, 2, params(20, 5, seed)));
        memetic_total += mean_theta(nsma_run(S.obj, S.poly, 2, params(20, 5, seed), mem));
    }
    CHECK(memetic_total >= ga_total);
}

TEST_CASE("constrained domination prefers feasibility") {
    Member feasible{VectorXd::Zero(2), (VectorXd(2) << 5, 5).finished(), 0.0, 0, 0.0};
    Member slight{VectorXd::Zero(2), (VectorXd(2) << 0, 0).finished(), 0.1, 0, 0.0};
    Member heavy{VectorXd::Zero(2), (VectorXd(2) << 0, 0).finished(), 0.5, 0, 0.0};
    CHECK(constrained_dominates(feasible, slight));
    CHECK(constrained_dominates(slight, heavy));
    CHECK_FALSE(constrained_dominates(heavy, feasible));
}

TEST_CASE("invalid parameters are rejected") {
    const Setup S = setup(5, 2, 6);
    GaParams p = params(1, 1, 0);
    CHECK_THROWS_AS(nsga2_run(S.obj, S.poly, 2, p), ConfigError);
}
