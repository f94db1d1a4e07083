#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qprob/classical.hpp"
#include "qprob/rng.hpp"

using namespace qprob;

namespace {

FiniteProbabilitySpace uniform(std::size_t n) {
    std::vector<std::string> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back("p" + std::to_string(i));
    return FiniteProbabilitySpace(std::move(points),
                                  std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

// Random space with weights summing to exactly 1.
FiniteProbabilitySpace random_space(std::size_t n, CounterRng& rng) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
        x = rng.next_double();
        sum += x;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w[i] /= sum;
        acc += w[i];
    }
    w[n - 1] = 1.0 - acc;
    std::vector<std::string> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back(std::to_string(i));
    return FiniteProbabilitySpace(std::move(points), std::move(w));
}

RandomVariable random_pm1_variable(const std::string& name, std::size_t n, CounterRng& rng) {
    std::vector<double> values(n);
    for (auto& v : values) v = rng.next_double() < 0.5 ? -1.0 : 1.0;
    return RandomVariable(name, {-1.0, 1.0}, std::move(values));
}

}  // namespace

TEST_CASE("event_probability: additivity and examples") {
    const auto space6 = uniform(6);
    CHECK(event_probability(space6, [](std::size_t i) { return i % 2 == 1; }) ==
          doctest::Approx(0.5));
    CHECK(event_probability(space6, [](std::size_t) { return false; }) == 0.0);

    const FiniteProbabilitySpace space({"a", "b", "c", "d"}, {0.1, 0.2, 0.3, 0.4});
    CHECK(event_probability(space, [](std::size_t i) { return i == 0 || i == 2; }) ==
          doctest::Approx(0.4));

    // additivity for disjoint events is an exact finite sum
    const double p1 = event_probability(space, [](std::size_t i) { return i == 0; });
    const double p2 = event_probability(space, [](std::size_t i) { return i == 3; });
    const double both = event_probability(space, [](std::size_t i) { return i == 0 || i == 3; });
    CHECK(both == p1 + p2);
}

TEST_CASE("bayes_conditional: containment, disjoint, overlap, null") {
    const auto space = uniform(4);
    const PointPredicate a = [](std::size_t i) { return i < 2; };
    const PointPredicate b_contains = [](std::size_t) { return true; };
    const PointPredicate b_disjoint = [](std::size_t i) { return i >= 2; };
    const PointPredicate b_half = [](std::size_t i) { return i == 1 || i == 2; };

    CHECK(bayes_conditional(space, b_contains, a) == doctest::Approx(1.0));
    CHECK(bayes_conditional(space, b_disjoint, a) == doctest::Approx(0.0));
    CHECK(bayes_conditional(space, b_half, a) == doctest::Approx(0.5));
    CHECK_THROWS_AS(bayes_conditional(space, b_half, [](std::size_t) { return false; }),
                    ConditionOnNull);
}

TEST_CASE("joint_distribution examples") {
    // single identity-valued variable on a uniform 2-point space
    const auto space2 = uniform(2);
    const RandomVariable id("X", {0.0, 1.0}, {0.0, 1.0});
    const auto jpd1 = joint_distribution(space2, {id});
    REQUIRE(jpd1.support.size() == 2);
    CHECK(jpd1.probabilities[0] == doctest::Approx(0.5));

    // fully correlated pair
    const RandomVariable a("A", {-1.0, 1.0}, {1.0, -1.0});
    const RandomVariable b("B", {-1.0, 1.0}, {1.0, -1.0});
    const auto jpd2 = joint_distribution(space2, {a, b});
    REQUIRE(jpd2.support.size() == 2);
    CHECK(jpd2.probability_of({1.0, 1.0}) == doctest::Approx(0.5));
    CHECK(jpd2.probability_of({-1.0, -1.0}) == doctest::Approx(0.5));
    CHECK(jpd2.probability_of({1.0, -1.0}) == 0.0);

    // independent pair on a uniform 4-point space
    const auto space4 = uniform(4);
    const RandomVariable a4("A", {-1.0, 1.0}, {1.0, 1.0, -1.0, -1.0});
    const RandomVariable b4("B", {-1.0, 1.0}, {1.0, -1.0, 1.0, -1.0});
    const auto jpd4 = joint_distribution(space4, {a4, b4});
    REQUIRE(jpd4.support.size() == 4);
    for (double p : jpd4.probabilities) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("marginal examples and order consistency") {
    const auto space2 = uniform(2);
    const RandomVariable a("A", {-1.0, 1.0}, {1.0, -1.0});
    const RandomVariable b("B", {-1.0, 1.0}, {1.0, -1.0});
    const auto jpd = joint_distribution(space2, {a, b});

    const auto ma = marginal(jpd, {"A"});
    REQUIRE(ma.support.size() == 2);
    CHECK(ma.probability_of({1.0}) == doctest::Approx(0.5));
    CHECK(ma.probability_of({-1.0}) == doctest::Approx(0.5));

    // marginal onto everything is the identity (up to row order)
    const auto mall = marginal(jpd, {"A", "B"});
    for (std::size_t r = 0; r < jpd.support.size(); ++r)
        CHECK(mall.probability_of(jpd.support[r]) == doctest::Approx(jpd.probabilities[r]));

    CHECK_THROWS_AS(marginal(jpd, {"C"}), UnknownVariable);
}

TEST_CASE("marginalizing in any order agrees") {
    CounterRng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng.next_double() * 8);
        const auto space = random_space(n, rng);
        const auto a = random_pm1_variable("A", n, rng);
        const auto b = random_pm1_variable("B", n, rng);
        const auto c = random_pm1_variable("C", n, rng);
        const auto jpd = joint_distribution(space, {a, b, c});

        const auto direct = marginal(jpd, {"A"});
        const auto via_ab = marginal(marginal(jpd, {"A", "B"}), {"A"});
        const auto via_ca = marginal(marginal(jpd, {"C", "A"}), {"A"});
        for (double v : {-1.0, 1.0}) {
            CHECK(std::abs(direct.probability_of({v}) - via_ab.probability_of({v})) < 1e-12);
            CHECK(std::abs(direct.probability_of({v}) - via_ca.probability_of({v})) < 1e-12);
        }
    }
}

TEST_CASE("classical_ftp examples") {
    // independence collapses the decomposition
    const auto space4 = uniform(4);
    const RandomVariable a4("A", {-1.0, 1.0}, {1.0, 1.0, -1.0, -1.0});
    const RandomVariable b_indep("B", {0.0, 1.0}, {1.0, 0.0, 1.0, 0.0});
    CHECK(classical_ftp(space4, a4, b_indep, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

    // B = A
    CHECK(classical_ftp(space4, a4, a4, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

    // two-coin worked example: 0.6*0.9 + 0.4*0.2 = 0.62
    const FiniteProbabilitySpace coins({"HH", "HT", "TH", "TT"},
                                       {0.6 * 0.9, 0.6 * 0.1, 0.4 * 0.2, 0.4 * 0.8});
    const RandomVariable first("A", {0.0, 1.0}, {1.0, 1.0, 0.0, 0.0});
    const RandomVariable second("B", {0.0, 1.0}, {1.0, 0.0, 1.0, 0.0});
    CHECK(classical_ftp(coins, first, second, 1.0) == doctest::Approx(0.62).epsilon(1e-12));
}

TEST_CASE("ftp identity on random spaces") {
    CounterRng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_double() * 10);
        const auto space = random_space(n, rng);
        const auto a = random_pm1_variable("A", n, rng);
        const auto b = random_pm1_variable("B", n, rng);
        for (double target : {-1.0, 1.0}) {
            const double via_ftp = classical_ftp(space, a, b, target);
            const std::size_t target_idx = b.grid_index_of(target);
            const double direct = event_probability(
                space, [&](std::size_t p) { return b.outcome_index(p) == target_idx; });
            CHECK(std::abs(via_ftp - direct) < 1e-12);
        }
    }
}

TEST_CASE("bayes chain rule p(B|A)p(A) = p(A|B)p(B)") {
    CounterRng rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.next_double() * 9);
        const auto space = random_space(n, rng);
        const PointPredicate a = [](std::size_t i) { return i % 2 == 0; };
        const PointPredicate b = [n](std::size_t i) { return i < (n + 1) / 2; };
        const double pa = event_probability(space, a);
        const double pb = event_probability(space, b);
        if (pa <= 0.0 || pb <= 0.0) continue;
        CHECK(std::abs(bayes_conditional(space, b, a) * pa -
                       bayes_conditional(space, a, b) * pb) < 1e-12);
    }
}

TEST_CASE("random variables snap to the declared grid") {
    CHECK_THROWS_AS(RandomVariable("X", {0.0, 1.0}, {0.5}), ConfigInvalid);
    const RandomVariable x("X", {0.0, 1.0}, {1e-12, 1.0 - 1e-12});
    CHECK(x.value(0) == 0.0);
    CHECK(x.value(1) == 1.0);
}

TEST_CASE("space validation") {
    CHECK_THROWS_AS(FiniteProbabilitySpace({"a"}, {0.5}), ConfigInvalid);
    CHECK_THROWS_AS(FiniteProbabilitySpace({"a", "b"}, {1.5, -0.5}), ConfigInvalid);
}

TEST_CASE("space_from_jpd round trip") {
    const auto space2 = uniform(2);
    const RandomVariable a("A", {-1.0, 1.0}, {1.0, -1.0});
    const RandomVariable b("B", {-1.0, 1.0}, {1.0, -1.0});
    const auto jpd = joint_distribution(space2, {a, b});
    const auto rebuilt = space_from_jpd(jpd);
    const auto jpd2 = joint_distribution(rebuilt.space, rebuilt.variables);
    for (std::size_t r = 0; r < jpd.support.size(); ++r)
        CHECK(jpd2.probability_of(jpd.support[r]) ==
              doctest::Approx(jpd.probabilities[r]).epsilon(1e-12));
}
