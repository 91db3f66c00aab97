#include "sparsefront/harness.hpp"

#include <doctest.h>

#include <set>

using namespace sparsefront;

namespace {

VectorXd basis(int n, int i) {
    VectorXd e = VectorXd::Zero(n);
    e[i] = 1.0;
    return e;
}

FrontList basis_front(const PortfolioObjectives& obj) {
    FrontList X;
    for (int i = 0; i < 3; ++i) X.insert({basis(3, i), obj.values(basis(3, i)), SupportSet({i})}, "basis");
    return X;
}

}  // namespace

TEST_CASE("toy raw objective values at the three feasible points") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const double expected[3][2] = {{2.0, 4.0}, {0.5, 5.0}, {3.0, 1.0}};
    for (int i = 0; i < 3; ++i) {
        const VectorXd F = obj.values(basis(3, i));
        CHECK(F[0] == doctest::Approx(expected[i][0]).epsilon(1e-15));
        CHECK(F[1] == doctest::Approx(expected[i][1]).epsilon(1e-15));
    }
}

TEST_CASE("toy points are mutually nondominated") {
    const PortfolioObjectives obj = toy_instance().make_objectives();
    std::vector<VectorXd> Fs;
    for (int i = 0; i < 3; ++i) Fs.push_back(obj.values(basis(3, i)));
    CHECK(nondominated_filter(Fs).size() == 3);
}

TEST_CASE("sfsd on the toy keeps exactly the three basis points") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron poly = inst.make_polyhedron();
    const SfsdResult res = sfsd_run(basis_front(obj), obj, poly, 1);
    CHECK(res.natural_termination);
    REQUIRE(res.front.size() == 3);
    for (const auto& e : res.front.entries()) {
        const int i = e.point.J.indices()[0];
        CHECK((e.point.x - basis(3, i)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(e.theta >= kThetaTolerance);
    }
}

TEST_CASE("scalarization of the toy at the documented weights") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron poly = inst.make_polyhedron();
    auto solve = [&](double t) {
        VectorXd lambda(2);
        lambda << 1.0 / (1.0 + t), t / (1.0 + t);
        return scalarize_solve(obj, lambda, poly, 1);
    };
    const ScalarSolution a = solve(0.0);
    CHECK((a.x - basis(3, 1)).norm() < 1e-9);
    CHECK(a.value == doctest::Approx(0.5));
    CHECK(a.exact);
    const ScalarSolution b = solve(1.0);
    CHECK((b.x - basis(3, 2)).norm() < 1e-9);
    CHECK(b.value * 2.0 == doctest::Approx(4.0));
    const ScalarSolution tie = solve(5.0 / 8.0);
    CHECK((tie.x - basis(3, 1)).norm() < 1e-9);
}

TEST_CASE("scalarization front on the toy never contains the first basis point") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron poly = inst.make_polyhedron();
    std::vector<VectorXd> grid;
    for (int k = 0; k < 50; ++k) {
        const double t = 100.0 * k / 49.0;
        VectorXd lambda(2);
        lambda << 1.0 / (1.0 + t), t / (1.0 + t);
        grid.push_back(lambda);
    }
    const ScalarizationFront sf = scalarization_front(obj, poly, 1, grid);
    for (const auto& e : sf.front.entries()) CHECK(e.point.J != SupportSet({0}));
    CHECK(sf.front.size() == 2);
}

TEST_CASE("mohyb from basis starts recovers all toy supports") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron poly = inst.make_polyhedron();
    MoihtParams iht;
    Rng rng(1);
    iht.L = default_moiht_L(obj, 1, rng);
    std::vector<VectorXd> starts = {basis(3, 0), basis(3, 1), basis(3, 2)};
    const auto out = mohyb(obj, starts, poly, 1, iht, MospdParams{});
    std::set<SupportSet> supports;
    for (const auto& r : out) supports.insert(support_of(r.x));
    CHECK(supports.size() == 3);
}
