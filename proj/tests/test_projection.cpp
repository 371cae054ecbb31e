#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "simfdr/numeric.hpp"
#include "simfdr/projection.hpp"
#include "simfdr/rng.hpp"

#include "support/oracles.hpp"

using namespace simfdr;

namespace {
const double kHalfPi = std::acos(0.0);
}

TEST_CASE("clamp_probability pins the tails and rejects garbage") {
    CHECK(clamp_probability(0.3) == 0.3);
    CHECK(clamp_probability(0.0) == kPClampLow);
    CHECK(clamp_probability(1.0) == kPClampHigh);
    CHECK(clamp_probability(1e-15) == kPClampLow);
    CHECK(clamp_probability(kPClampLow) == kPClampLow);
    CHECK_THROWS_AS(clamp_probability(-0.1), std::domain_error);
    CHECK_THROWS_AS(clamp_probability(1.1), std::domain_error);
    CHECK_THROWS_AS(clamp_probability(std::nan("")), std::domain_error);
}

TEST_CASE("PValueTable caches quantile scores and validates input") {
    PValueTable table({0.1, 0.5}, {0.9, 0.25});
    REQUIRE(table.size() == 2);
    CHECK(table.z1()[0] == std_normal_quantile(0.1));
    CHECK(table.z1()[1] == 0.0);
    CHECK(table.z2()[0] == std_normal_quantile(0.9));
    CHECK(table.z2()[1] == std_normal_quantile(0.25));

    CHECK_THROWS_AS(PValueTable({}, {}), std::domain_error);
    CHECK_THROWS_AS(PValueTable({0.1}, {0.2, 0.3}), std::domain_error);
    CHECK_THROWS_WITH_AS(PValueTable({0.1, -0.5}, {0.2, 0.3}),
                         "PValueTable: p-value outside [0, 1] at row 2", std::domain_error);

    table.set_ids({"a", "b"});
    CHECK(table.ids()[1] == "b");
    CHECK_THROWS_AS(table.set_ids({"only-one"}), std::domain_error);
    table.set_truth({1, 0});
    CHECK(table.truth()[0] == 1);
    CHECK_THROWS_AS(table.set_truth({1, 0, 1}), std::domain_error);
}

TEST_CASE("theta_grid spans [0, pi/2] inclusively") {
    const auto grid = theta_grid(5);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == kHalfPi);
    CHECK(grid[2] == doctest::Approx(kHalfPi / 2.0).epsilon(1e-15));
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] > grid[i - 1]);
    CHECK_THROWS_AS(theta_grid(1), std::domain_error);
    CHECK(theta_grid(2) == std::vector<double>{0.0, kHalfPi});
}

TEST_CASE("interior projection matches the definition") {
    // z = cos(pi/4) Phi^{-1}(0.1) + sin(pi/4) Phi^{-1}(0.2), p = Phi(z)
    const double got = project(0.1, 0.2, kHalfPi / 2.0);
    CHECK(got == doctest::Approx(0.0666375).epsilon(1e-5));
    const long double z = std::sqrt(0.5L) * (-1.2815515655446004L - 0.8416212335729142L);
    CHECK(got ==
          doctest::Approx(oracle::phi(static_cast<double>(z))).epsilon(1e-12));

    // against the oracle across the quadrant
    RngStream rng(21, 0);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform01();
        const double b = rng.uniform01();
        const double theta = kHalfPi * rng.uniform01();
        const double expected =
            oracle::phi(std::cos(theta) * oracle::phi_inv(a) + std::sin(theta) * oracle::phi_inv(b));
        CHECK(project(a, b, theta) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("projection endpoints pass the inputs through unchanged") {
    CHECK(project(0.123, 0.456, 0.0) == 0.123);
    CHECK(project(0.123, 0.456, kHalfPi) == 0.456);
    // the constant inside project must equal acos(0.0) for this to hold
    CHECK(project(0.9, 0.1, std::acos(0.0)) == 0.1);
}

TEST_CASE("projected output is clamped away from 0 and 1") {
    CHECK(project(0.0, 0.0, kHalfPi / 2.0) == kPClampLow);
    CHECK(project(1.0, 1.0, kHalfPi / 2.0) == kPClampHigh);
}

TEST_CASE("project rejects directions outside the quadrant") {
    CHECK_THROWS_AS(project(0.5, 0.5, -0.01), std::domain_error);
    CHECK_THROWS_AS(project(0.5, 0.5, kHalfPi + 0.01), std::domain_error);
    CHECK_THROWS_AS(project(0.5, 0.5, std::nan("")), std::domain_error);
}

TEST_CASE("project_all agrees with the scalar projection row by row") {
    RngStream rng(22, 0);
    std::vector<double> p1(40), p2(40);
    for (std::size_t i = 0; i < 40; ++i) {
        p1[i] = rng.uniform01();
        p2[i] = rng.uniform01();
    }
    const PValueTable table(p1, p2);
    for (double theta : {0.0, 0.3, kHalfPi / 2.0, 1.4, kHalfPi}) {
        const ProjectedSample sample = project_all(table, theta);
        CHECK(sample.theta == theta);
        REQUIRE(sample.values.size() == 40);
        for (std::size_t i = 0; i < 40; ++i)
            CHECK(sample.values[i] == project(p1[i], p2[i], theta));
    }
}

TEST_CASE("projected_scores are the combined quantile scores") {
    const PValueTable table({0.1, 0.7}, {0.2, 0.4});
    const auto z = projected_scores(table, 0.3);
    REQUIRE(z.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(z[i] ==
              std::cos(0.3) * table.z1()[i] + std::sin(0.3) * table.z2()[i]);
    CHECK(projected_scores(table, 0.0) == table.z1());
    CHECK(projected_scores(table, kHalfPi) == table.z2());
    // scores are the quantile transform of the projected sample (up to clamp)
    const auto sample = project_all(table, 0.3);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std_normal_cdf(z[i]) == doctest::Approx(sample.values[i]).epsilon(1e-15));
}
