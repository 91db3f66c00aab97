#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sparsefront;
using testutil::basis;

namespace {

VectorXd vec(std::initializer_list<double> v) {
    VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

std::vector<std::size_t> brute_force_front(const std::vector<VectorXd>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
            if (i == j) continue;
            bool le = true, lt = false;
            for (Eigen::Index k = 0; k < pts[i].size(); ++k) {
                le = le && pts[j][k] <= pts[i][k];
                lt = lt || pts[j][k] < pts[i][k];
            }
            dominated = le && lt;
        }
        if (!dominated) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_CASE("support_of drops entries at or below the tolerance") {
    CHECK(support_of(vec({1, 0, 0})) == SupportSet({0}));
    CHECK(support_of(vec({0.6, 5e-8, 0.4})) == SupportSet({0, 2}));
    CHECK(support_of(vec({0, 0, 0})).empty());
}

TEST_CASE("super_supports completes the support to size s") {
    CHECK(super_supports(vec({1, 0, 0}), 1) == std::vector<SupportSet>{SupportSet({0})});
    CHECK(super_supports(vec({1, 0, 0}), 2) == std::vector<SupportSet>{SupportSet({0, 1}), SupportSet({0, 2})});
    CHECK(super_supports(vec({0.5, 0.5, 0, 0}), 3) ==
          std::vector<SupportSet>{SupportSet({0, 1, 2}), SupportSet({0, 1, 3})});
}

TEST_CASE("a full support has exactly one super support") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));
        const int s = 1 + static_cast<int>(rng.below(n - 1));
        const VectorXd x = testutil::random_simplex_point(n, s, rng);
        const auto J = super_supports(x, s);
        REQUIRE(J.size() == 1);
        CHECK(J[0] == support_of(x));
    }
}

TEST_CASE("super_supports falls back to the smallest-index completion past the cap") {
    VectorXd x = VectorXd::Zero(30);
    x[29] = 1.0;
    const auto J = super_supports(x, 6);
    REQUIRE(J.size() == 1);
    CHECK(J[0] == SupportSet({0, 1, 2, 3, 4, 29}));
    CHECK(first_super_support(x, 6) == J[0]);
}

TEST_CASE("SupportSet text round trip") {
    const SupportSet J({7, 0, 3});
    CHECK(J.to_string() == "0;3;7");
    CHECK(SupportSet::parse("0;3;7") == J);
    CHECK(SupportSet::parse("").empty());
}

TEST_CASE("compare classifies pairs") {
    CHECK(compare(vec({1, 1}), vec({1, 2})) == Relation::Dominates);
    CHECK(compare(vec({2, 4}), vec({0.5, 5})) == Relation::Incomparable);
    CHECK(compare(vec({3, 3}), vec({3, 3})) == Relation::Equal);
    CHECK(compare(vec({1, 2}), vec({1, 1})) == Relation::Dominated);
}

TEST_CASE("compare is antisymmetric") {
    Rng rng(11);
    for (int t = 0; t < 500; ++t) {
        VectorXd a(3), b(3);
        for (int k = 0; k < 3; ++k) {
            a[k] = static_cast<double>(rng.below(3));
            b[k] = static_cast<double>(rng.below(3));
        }
        const Relation ab = compare(a, b), ba = compare(b, a);
        CHECK((ab == Relation::Dominates) == (ba == Relation::Dominated));
        CHECK((ab == Relation::Equal) == (ba == Relation::Equal));
        CHECK((ab == Relation::Incomparable) == (ba == Relation::Incomparable));
    }
}

TEST_CASE("nondominated_filter examples") {
    CHECK(nondominated_filter({vec({2, 4}), vec({0.5, 5}), vec({3, 1})}).size() == 3);
    CHECK(nondominated_filter({vec({1, 1}), vec({2, 2})}) == std::vector<std::size_t>{0});
}

TEST_CASE("nondominated_filter matches the pairwise oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 1 + static_cast<int>(rng.below(50));
        const int m = 2 + static_cast<int>(rng.below(2));
        std::vector<VectorXd> pts;
        for (int i = 0; i < N; ++i) {
            VectorXd p(m);
            // Coarse grid values so that ties and duplicates occur.
            for (int k = 0; k < m; ++k) p[k] = static_cast<double>(rng.below(6));
            pts.push_back(p);
        }
        CHECK(nondominated_filter(pts) == brute_force_front(pts));
    }
}

TEST_CASE("crowding distance examples") {
    const auto cd = crowding_distance({vec({0, 2}), vec({1, 1}), vec({2, 0})});
    CHECK(std::isinf(cd[0]));
    CHECK(cd[1] == doctest::Approx(2.0));
    CHECK(std::isinf(cd[2]));
    CHECK(std::isinf(crowding_distance({vec({1, 1})})[0]));
    const auto two = crowding_distance({vec({0, 1}), vec({1, 0})});
    CHECK((std::isinf(two[0]) && std::isinf(two[1])));
}

TEST_CASE("FrontList keeps each support group mutually nondominated") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        FrontList X;
        for (int k = 0; k < 80; ++k) {
            const int g = static_cast<int>(rng.below(3));
            VectorXd F(2);
            F << static_cast<double>(rng.below(8)), static_cast<double>(rng.below(8));
            X.insert({basis(3, g), F, SupportSet({g})});
            for (const SupportSet& J : X.supports()) {
                const auto group = X.group(J);
                for (const auto* a : group)
                    for (const auto* b : group)
                        if (a != b) CHECK(compare(a->point.F, b->point.F) == Relation::Incomparable);
            }
        }
    }
}

TEST_CASE("FrontList rejects duplicates in favour of the incumbent") {
    FrontList X;
    const auto first = X.insert({basis(2, 0), vec({1, 1}), SupportSet({0})}, "first");
    REQUIRE(first);
    CHECK_FALSE(X.insert({basis(2, 0), vec({1, 1}), SupportSet({0})}, "second"));
    CHECK(X.size() == 1);
    CHECK(X.entries()[0].origin == "first");
    // The same values in another group are kept.
    CHECK(X.insert({basis(2, 1), vec({1, 1}), SupportSet({1})}));
    // A dominating point evicts the incumbent of its group only.
    CHECK(X.insert({basis(2, 0), vec({0, 0}), SupportSet({0})}));
    CHECK(X.size() == 2);
    CHECK_FALSE(X.contains(*first));
    CHECK(X.global_front().size() == 1);
}
