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

/// Minimiser of ||u - v||^2 over s-subsets, v = max(u, 0) on the subset.
VectorXd enumerate_projection(const VectorXd& u, int s) {
    const int n = static_cast<int>(u.size());
    VectorXd best;
    double best_dist = kInf;
    for (const SupportSet& S : all_supports(n, std::min(s, n))) {
        VectorXd v = VectorXd::Zero(n);
        for (int i : S.indices()) v[i] = std::max(u[i], 0.0);
        const double d = (u - v).squaredNorm();
        if (d < best_dist) {
            best_dist = d;
            best = v;
        }
    }
    return best;
}

std::shared_ptr<ObjectiveModel> flat_model(int n) {
    auto m = std::make_shared<ObjectiveModel>();
    m->c = VectorXd::Zero(n);
    m->Q = MatrixXd::Identity(n, n);
    m->beta = VectorXd::Ones(n);
    return m;
}

}  // namespace

TEST_CASE("sparse_project examples") {
    CHECK(sparse_project(vec({0.5, 0.3, -0.2, 0.4}), 2) == vec({0.5, 0, 0, 0.4}));
    CHECK(sparse_project(vec({0.2, 0, 0.7}), 2) == vec({0.2, 0, 0.7}));
    CHECK(sparse_project(vec({0.3, 0.3, 0.1}), 1) == vec({0.3, 0, 0}));
}

TEST_CASE("sparse_project agrees with support enumeration") {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const int s = 1 + static_cast<int>(rng.below(n));
        VectorXd u(n);
        for (int i = 0; i < n; ++i) u[i] = rng.normal();
        CHECK(sparse_project(u, s) == enumerate_projection(u, s));
    }
}

TEST_CASE("normalize_project examples") {
    const VectorXd p = normalize_project(vec({0.5, 0.3, -0.2, 0.4}), 2);
    CHECK((p - vec({5.0 / 9.0, 0, 0, 4.0 / 9.0})).cwiseAbs().maxCoeff() < 1e-15);
    const VectorXd on = vec({0.25, 0, 0.75});
    CHECK(normalize_project(on, 2) == on);
    CHECK(normalize_project(vec({-1, -2, -3}), 1) == basis(3, 0));
}

TEST_CASE("normalize_project always lands on the sparse simplex") {
    Rng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(10));
        const int s = 1 + static_cast<int>(rng.below(n));
        VectorXd u(n);
        for (int i = 0; i < n; ++i) u[i] = rng.normal();
        CHECK(is_feasible(normalize_project(u, s), simplex_polyhedron(n), s));
    }
}

TEST_CASE("simplex polyhedron layout") {
    const Polyhedron P = build_polyhedron({}, *flat_model(3), 3);
    CHECK(P.A.rows() == 0);
    CHECK(P.Aeq == MatrixXd::Ones(1, 3));
    CHECK(P.beq[0] == 1.0);
    CHECK(P.lower == VectorXd::Zero(3));
    CHECK(P.upper.array().isInf().all());
}

TEST_CASE("a beta window containing one leaves the simplex unchanged") {
    ConstraintSpec spec;
    spec.beta_window = std::make_pair(0.8, 1.2);
    const Polyhedron P = build_polyhedron(spec, *flat_model(3), 3);
    Rng rng(53);
    for (int t = 0; t < 50; ++t) CHECK(is_feasible(testutil::random_simplex_point(3, 3, rng), P, 0));
}

TEST_CASE("zero turnover admits only the anchor") {
    ConstraintSpec spec;
    const VectorXd x0 = vec({0.2, 0.3, 0.5});
    spec.turnover = TurnoverConstraint{x0, 0.0};
    const Polyhedron P = build_polyhedron(spec, *flat_model(3), 3);
    CHECK(is_feasible(x0, P, 0));
    CHECK_FALSE(is_feasible(vec({0.25, 0.3, 0.45}), P, 0));
    const auto proj = project_restricted(P, basis(3, 0), SupportSet({0, 1, 2}));
    REQUIRE(proj);
    CHECK((*proj - x0).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("turnover anchor is feasible whenever it lies on the simplex") {
    Rng rng(59);
    for (int t = 0; t < 20; ++t) {
        ConstraintSpec spec;
        const VectorXd x0 = testutil::random_simplex_point(5, 3, rng);
        spec.turnover = TurnoverConstraint{x0, rng.uniform(0.0, 1.0)};
        CHECK(is_feasible(x0, build_polyhedron(spec, *flat_model(5), 5), 0));
    }
}

TEST_CASE("is_feasible examples") {
    const Polyhedron P = simplex_polyhedron(3);
    CHECK(is_feasible(basis(3, 0), P, 1));
    const FeasibilityReport card = is_feasible(vec({0.5, 0.5, 0}), P, 1);
    CHECK_FALSE(card);
    CHECK(card.violations.back().kind == "cardinality");
    CHECK_FALSE(is_feasible(vec({0.6, 0.6, -0.2}), P, 0));
    CHECK(linear_violation(vec({0.6, 0.6, -0.2}), P) > 0.1);
}

TEST_CASE("inconsistent specifications are rejected") {
    ConstraintSpec bounds;
    bounds.upper = VectorXd::Constant(3, 0.2);
    CHECK_THROWS_AS(build_polyhedron(bounds, *flat_model(3), 3), ConfigError);
    ConstraintSpec beta;
    beta.beta_window = std::make_pair(1.5, 2.0);
    CHECK_THROWS_AS(build_polyhedron(beta, *flat_model(3), 3), InfeasibleError);
    ConstraintSpec sectors;
    sectors.sectors.push_back({{0, 7}, 0.0, 1.0});
    CHECK_THROWS_AS(sectors.validate(3), ConfigError);
}

TEST_CASE("sector bounds restrict a projection") {
    ConstraintSpec spec;
    spec.sectors.push_back({{0, 1}, 0.0, 0.4});
    const Polyhedron P = build_polyhedron(spec, *flat_model(3), 3);
    CHECK_FALSE(is_feasible(basis(3, 0), P, 0));
    const auto proj = project_restricted(P, basis(3, 0), SupportSet({0, 2}));
    REQUIRE(proj);
    CHECK((*proj - vec({0.4, 0, 0.6})).cwiseAbs().maxCoeff() < 1e-7);
    CHECK_FALSE(project_restricted(P, basis(3, 0), SupportSet({0})));
}
