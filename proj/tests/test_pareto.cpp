#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hvmax/pareto.hpp"

using namespace hvmax::pareto;
using Catch::Matchers::WithinAbs;

TEST_CASE("toy_objectives endpoints and interior") {
    const ToyProblem p{};
    CHECK(toy_objectives(0.0, p) == std::pair{0.0, 1.0});
    CHECK(toy_objectives(1.0, p) == std::pair{1.0, 0.0});
    const auto [f1, f2] = toy_objectives(0.5, p);
    CHECK(f1 == 0.5);
    CHECK_THAT(f2, WithinAbs(0.5358867312681466, 1e-15));

    CHECK_THROWS_AS(toy_objectives(-0.01, p), std::domain_error);
    CHECK_THROWS_AS(toy_objectives(1.01, p), std::domain_error);
    CHECK_THROWS_AS(toy_objectives(0.5, ToyProblem{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(toy_objectives(0.5, ToyProblem{0.0}), std::invalid_argument);
}

TEST_CASE("both objectives trade off strictly along the frontier") {
    const ToyProblem p{};
    double prev_f1 = -1.0, prev_f2 = 2.0;
    for (int k = 0; k <= 100; ++k) {
        const auto [f1, f2] = toy_objectives(k / 100.0, p);
        CHECK(f1 > prev_f1);
        CHECK(f2 < prev_f2);
        prev_f1 = f1;
        prev_f2 = f2;
    }
}

TEST_CASE("linear_argmin runs to an endpoint for every weighting") {
    const ToyProblem p{};
    CHECK(linear_argmin(p, 1.0, 0.0, 1e-4) == 0.0);  // only f1 counts
    CHECK(linear_argmin(p, 0.0, 1.0, 1e-4) == 1.0);  // only f2 counts
    CHECK(linear_argmin(p, 2.0, 1.0, 1e-4) == 0.0);  // f(0)=1 < f(1)=2
    CHECK(linear_argmin(p, 1.0, 3.0, 1e-4) == 1.0);  // f(1)=1 < f(0)=3

    for (int k = 1; k < 100; k += 7) {
        const double x = linear_argmin(p, k, 100.0 - k, 1e-4);
        CHECK((x == 0.0 || x == 1.0));
    }
}

TEST_CASE("equal weights tie exactly at both endpoints, resolved to x = 0") {
    const ToyProblem p{};
    // f(0) = 0 + 1^0.9 = 1 and f(1) = 1 + 0^0.9 = 1 exactly in doubles,
    // and the frontier is strictly above 1 in between
    const auto [a1, a2] = toy_objectives(0.0, p);
    const auto [b1, b2] = toy_objectives(1.0, p);
    CHECK(a1 + a2 == 1.0);
    CHECK(b1 + b2 == 1.0);
    const auto [m1, m2] = toy_objectives(0.5, p);
    CHECK(m1 + m2 > 1.0);
    CHECK(linear_argmin(p, 1.0, 1.0, 1e-4) == 0.0);  // ties go to the smaller x
}

TEST_CASE("linear_argmin validation") {
    const ToyProblem p{};
    CHECK_THROWS_AS(linear_argmin(p, -1.0, 1.0, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(linear_argmin(p, 0.0, 0.0, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(linear_argmin(p, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(linear_argmin(p, 1.0, 1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("hv_argmax reaches the interior of the concave frontier") {
    const ToyProblem p{};
    const double x = hv_argmax(p, 2.0, 2.0, 1e-4);
    CHECK(x == 0.4895);  // frozen from a high-precision grid oracle
    CHECK(x > 0.05);
    CHECK(x < 0.95);
}

TEST_CASE("hv_argmax under lopsided reference points") {
    const ToyProblem p{};
    // a huge z1 makes log(z1 - f1) flat, so only minimizing f2 matters
    CHECK(hv_argmax(p, 1e6, 2.0, 1e-4) == 1.0);
    CHECK(hv_argmax(p, 2.0, 1e6, 1e-4) == 0.0);
}

TEST_CASE("hv_argmax near the symmetric linear limit sits at the middle") {
    // as the exponent approaches 1 the frontier becomes the line f2 = 1 - x
    // and z1 = z2 makes the problem symmetric around x = 1/2
    CHECK(hv_argmax(ToyProblem{0.999999}, 2.0, 2.0, 1e-4) == 0.5);
}

TEST_CASE("hv_argmax validation") {
    const ToyProblem p{};
    CHECK_THROWS_AS(hv_argmax(p, 1.0, 2.0, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(hv_argmax(p, 2.0, 0.5, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(hv_argmax(p, 2.0, 2.0, 2e-4), std::invalid_argument);
}

TEST_CASE("the hv maximizer is grid-Pareto-efficient") {
    const ToyProblem p{};
    const double step = 1e-4;
    const double xstar = hv_argmax(p, 2.0, 2.0, step);
    const auto [s1, s2] = toy_objectives(xstar, p);
    const long m = std::lround(1.0 / step);
    for (long k = 0; k <= m; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(m);
        const auto [f1, f2] = toy_objectives(x, p);
        const bool dominates = f1 <= s1 && f2 <= s2 && (f1 < s1 || f2 < s2);
        if (dominates) FAIL("grid point " << x << " dominates the hv maximizer");
    }
    SUCCEED("no grid point dominates the hv maximizer");
}
