#include "test_util.hpp"

#include <doctest.h>

using namespace sparsefront;
using testutil::basis;

namespace {

VectorXd vec(std::initializer_list<double> v) {
    VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

/// f_1 = ||x||^2 and f_2 = (x_1 - 1)^2 on R^2.
class TwoQuadratics final : public MultiObjective {
public:
    int dim() const override { return 2; }
    int count() const override { return 2; }
    VectorXd values(const VectorXd& x) const override { return vec({x.squaredNorm(), (x[0] - 1.0) * (x[0] - 1.0)}); }
    MatrixXd jacobian(const VectorXd& x) const override {
        MatrixXd G(2, 2);
        G << 2.0 * x[0], 2.0 * x[1], 2.0 * (x[0] - 1.0), 0.0;
        return G;
    }
};

ProblemInstance two_asset_instance() {
    auto model = std::make_shared<ObjectiveModel>();
    ProblemInstance inst;
    inst.name = "two";
    inst.n = 3;
    inst.s = 2;
    // A third asset with poor return and high variance keeps s < n.
    model->c = vec({0.02, 0.05, 0.0});
    MatrixXd Q = MatrixXd::Zero(3, 3);
    Q.topLeftCorner(2, 2) = (MatrixXd(2, 2) << 0.01, 0.002, 0.002, 0.04).finished();
    Q(2, 2) = 0.09;
    model->Q = Q;
    model->esg = VectorXd::Zero(3);
    model->beta = VectorXd::Zero(3);
    inst.model = model;
    inst.objectives = testutil::mean_variance_selection();
    inst.validate();
    return inst;
}

FrontList seeded_front(const PortfolioObjectives& obj, const std::vector<VectorXd>& xs, int s) {
    FrontList X;
    for (const VectorXd& x : xs) X.insert({x, obj.values(x), first_super_support(x, s)}, "seed");
    return X;
}

double group_hypervolume(const FrontList& X, const SupportSet& J, const VectorXd& ref) {
    Front F;
    for (const auto* e : X.group(J)) F.push_back(e->point.F);
    return hypervolume(F, ref);
}

}  // namespace

TEST_CASE("objective subsets are ordered by size then lexicographically") {
    const auto subsets = objective_subsets(3);
    const std::vector<std::vector<int>> expected = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    CHECK(subsets == expected);
}

TEST_CASE("exploration line search examples") {
    const TwoQuadratics f;
    const VectorXd z = vec({0.5, 0.0});
    SUBCASE("empty group accepts the unit step") {
        const StepResult r = armijo_explore(f, z, vec({-0.1, 0.0}), {});
        CHECK(r.alpha == 1.0);
    }
    SUBCASE("the point itself is beaten on the first objective") {
        const StepResult r = armijo_explore(f, z, vec({-0.1, 0.0}), {f.values(z)});
        CHECK(r.alpha == 1.0);
    }
    SUBCASE("a direction worsening both objectives finds no step") {
        const StepResult r = armijo_explore(f, z, vec({0.0, 0.3}), {f.values(z)});
        CHECK(r.alpha == 0.0);
        CHECK_FALSE(r.found);
    }
}

TEST_CASE("zero iterations return the filtered initial list") {
    const ProblemInstance inst = two_asset_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron P = inst.make_polyhedron();
    FrontList X0;
    for (const VectorXd& x : {vec({0.5, 0.5, 0}), vec({0.4, 0.4, 0.2}), vec({0.2, 0.8, 0})})
        X0.insert({x, obj.values(x), SupportSet({0, 1})});
    SfsdParams params;
    params.budget = Budget::iterations_only(0);
    const SfsdResult r = sfsd_run(X0, obj, P, 2, params);
    CHECK(r.iterations == 0);
    // (0.4,0.4,0.2) has support size 3 and is rejected; the two others share
    // the support {0,1} and are mutually nondominated.
    CHECK(r.rejected.size() == 1);
    CHECK(r.front.size() == 2);
}

TEST_CASE("two-asset mean-variance chain from one interior point") {
    const ProblemInstance inst = two_asset_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron P = inst.make_polyhedron();
    SfsdParams params;
    params.budget = Budget::iterations_only(200);
    const SfsdResult r = sfsd_run(seeded_front(obj, {vec({0.5, 0.5, 0})}, 2), obj, P, 2, params);
    REQUIRE(r.front.size() >= 5);

    // On {0,1} the efficient weights on asset 0 run from the max-return
    // vertex (0) to the minimum-variance point (0.038/0.046).
    const double w_minvar = (0.04 - 0.002) / (0.01 + 0.04 - 2 * 0.002);
    double lo = 1.0, hi = 0.0;
    for (const auto& e : r.front.group(SupportSet({0, 1}))) {
        const double w = e->point.x[0];
        CHECK(w >= -1e-9);
        CHECK(w <= w_minvar + 1e-4);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
        CHECK(common_direction(e->point.x, SupportSet({0, 1}), obj.jacobian(e->point.x), P).theta >= -1e-5);
    }
    CHECK(lo < 0.05);
    CHECK(hi > w_minvar - 0.05);
    const auto group = r.front.group(SupportSet({0, 1}));
    for (const auto* a : group)
        for (const auto* b : group)
            if (a != b) CHECK_FALSE(dominates(a->point.F, b->point.F));
}

TEST_CASE("per-support hypervolume never decreases across iterations") {
    const ProblemInstance inst = testutil::mean_variance_instance("hv", 6, 2, 42);
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron P = inst.make_polyhedron();
    Rng rng(107);
    std::vector<VectorXd> xs;
    for (int k = 0; k < 4; ++k) xs.push_back(testutil::random_simplex_point(6, 2, rng));
    const FrontList X0 = seeded_front(obj, xs, 2);
    VectorXd ref = VectorXd::Constant(2, -kInf);
    for (const auto& F : X0.objective_vectors()) ref = ref.cwiseMax(F);
    ref.array() += 1.0;

    std::vector<double> previous;
    for (long k = 0; k <= 5; ++k) {
        SfsdParams params;
        params.budget = Budget::iterations_only(k);
        const SfsdResult r = sfsd_run(X0, obj, P, 2, params);
        std::vector<double> hv;
        for (const auto& e : X0.entries()) hv.push_back(group_hypervolume(r.front, e.point.J, ref));
        if (!previous.empty())
            for (std::size_t g = 0; g < hv.size(); ++g) CHECK(hv[g] >= previous[g] - 1e-12);
        previous = hv;
    }
}

TEST_CASE("points are stationary on their support at natural termination") {
    const ProblemInstance inst = testutil::mean_variance_instance("stat", 5, 2, 43);
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron P = inst.make_polyhedron();
    SfsdParams params;
    params.budget = Budget::iterations_only(500);
    params.crowding_gate = kInf;  // no exploration: the list converges quickly
    const SfsdResult r = sfsd_run(seeded_front(obj, {vec({0.5, 0.5, 0, 0, 0}), vec({0, 0, 0.3, 0.7, 0})}, 2), obj,
                                  P, 2, params);
    REQUIRE(r.natural_termination);
    for (const auto& e : r.front.entries())
        CHECK(common_direction(e.point.x, e.point.J, obj.jacobian(e.point.x), P).theta >= -1e-7);
}

TEST_CASE("initial front pairs points with size-s supports") {
    const ProblemInstance inst = testutil::mean_variance_instance("init", 6, 3, 44);
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron P = inst.make_polyhedron();
    const FrontList X = initial_front(initial_points(6, 3, 9), {}, obj, P, 3);
    CHECK_FALSE(X.empty());
    for (const auto& e : X.entries()) {
        CHECK(e.point.J.size() == 3);
        CHECK(e.point.J.includes(support_of(e.point.x)));
        CHECK(is_feasible(e.point.x, P, 3));
    }
}

TEST_CASE("all-infeasible input is an error") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    FrontList X;
    X.insert({vec({0.5, 0.5, 0}), obj.values(vec({0.5, 0.5, 0})), SupportSet({0})});
    CHECK_THROWS_AS(sfsd_run(X, obj, inst.make_polyhedron(), 1), ConfigError);
}
