#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "simfdr/baselines.hpp"
#include "simfdr/error.hpp"
#include "simfdr/estimation.hpp"
#include "simfdr/rng.hpp"

#include "support/oracles.hpp"

using namespace simfdr;

TEST_CASE("step-up control on a hand example") {
    CHECK(bh({0.01, 0.02, 0.03, 0.5}, 0.05) == std::vector<std::size_t>{0, 1, 2});
    CHECK(bh({0.9, 0.8}, 0.05).empty());
    // ties share the fate of the cutoff rank
    CHECK(bh({0.025, 0.025, 0.9}, 0.05) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("step-up scan agrees with the adjusted-p-value oracle") {
    RngStream rng(41, 0);
    const double atoms[] = {0.001, 0.01, 0.02, 0.05, 0.2, 0.5, 0.9};
    const double alphas[] = {0.01, 0.05, 0.1, 0.25};
    for (int instance = 0; instance < 300; ++instance) {
        const std::size_t m = 1 + rng.uniform_below(60);
        std::vector<double> pvalues(m);
        for (double& v : pvalues)
            v = rng.uniform01() < 0.5 ? atoms[rng.uniform_below(7)] : rng.uniform01();
        const double alpha = alphas[rng.uniform_below(4)];
        CAPTURE(instance);
        CHECK(bh(pvalues, alpha) == oracle::bh_adjusted(pvalues, alpha));
    }
}

TEST_CASE("step-up rejections grow with alpha") {
    RngStream rng(42, 0);
    for (int instance = 0; instance < 20; ++instance) {
        const std::size_t m = 5 + rng.uniform_below(40);
        std::vector<double> pvalues(m);
        for (double& v : pvalues)
            v = std::pow(rng.uniform01(), 2.0);
        std::vector<std::size_t> previous;
        for (double alpha : {0.01, 0.05, 0.2, 0.5}) {
            const auto current = bh(pvalues, alpha);
            CHECK(std::includes(current.begin(), current.end(), previous.begin(),
                                previous.end()));
            previous = current;
        }
    }
}

TEST_CASE("step-up input validation") {
    CHECK_THROWS_AS(bh({}, 0.05), std::domain_error);
    CHECK_THROWS_AS(bh({0.5, 1.2}, 0.05), std::domain_error);
    CHECK_THROWS_AS(bh({0.5, -0.1}, 0.05), std::domain_error);
    CHECK_THROWS_AS(bh({0.5}, 0.0), std::domain_error);
    CHECK_THROWS_AS(bh({0.5}, 1.0), std::domain_error);
}

TEST_CASE("adaptive single-column procedure on a hand example") {
    const std::vector<double> pvalues = {0.001, 0.002, 0.5, 0.7};
    const StoreyResult result = storey(pvalues, 0.05, default_lambda_grid());
    CHECK(result.lambda == 0.04);
    CHECK(result.pi0 == 2.0 / ((1.0 - 0.04) * 4.0));
    CHECK(result.pi0 == doctest::Approx(0.5208333333333334).epsilon(1e-15));
    CHECK(result.threshold == 0.002);
    CHECK(result.rejected == std::vector<std::size_t>{0, 1});

    // the pieces are the shared pipeline primitives, bit for bit
    ProjectedSample sample;
    sample.values = pvalues;
    const NullCdf identity = NullCdf::identity();
    const Pi0Estimate pi0 = pi0_hat(sample, identity, default_lambda_grid());
    CHECK(result.pi0 == pi0.pi0);
    CHECK(result.threshold == threshold_alpha(sample, identity, pi0.pi0, 0.05));
}

TEST_CASE("adaptive single-column procedure with the mean-of-three null") {
    const std::vector<double> pvalues = {0.001, 0.002, 0.5, 0.7};
    const NullCdf null_cdf = NullCdf::mean_of_three_uniforms();
    const StoreyResult result = storey(pvalues, 0.05, default_lambda_grid(), null_cdf);

    // same lambda walk as the identity case but with cubic-null denominators:
    // pi0 = #{p > 0.04} / ((1 - F0(0.04)) m), F0(0.04) = 0.12^3 / 6
    CHECK(result.lambda == 0.04);
    CHECK(result.pi0 == 2.0 / ((1.0 - null_cdf(0.04)) * 4.0));
    CHECK(result.pi0 == doctest::Approx(0.50014404148).epsilon(1e-10));
    // scan: F0 at 0.5 jumps to 1/2, so only the two tiny values survive
    CHECK(result.threshold == 0.002);
    CHECK(result.rejected == std::vector<std::size_t>{0, 1});

    ProjectedSample sample;
    sample.values = pvalues;
    const Pi0Estimate pi0 = pi0_hat(sample, null_cdf, default_lambda_grid());
    CHECK(result.pi0 == pi0.pi0);
    CHECK(result.threshold == threshold_alpha(sample, null_cdf, pi0.pi0, 0.05));

    // the three-argument form is the identity-null special case, bit for bit
    const StoreyResult plain = storey(pvalues, 0.05, default_lambda_grid());
    const StoreyResult identity =
        storey(pvalues, 0.05, default_lambda_grid(), NullCdf::identity());
    CHECK(plain.pi0 == identity.pi0);
    CHECK(plain.lambda == identity.lambda);
    CHECK(plain.threshold == identity.threshold);
    CHECK(plain.rejected == identity.rejected);
}

TEST_CASE("adaptive procedure validation and propagation") {
    CHECK_THROWS_AS(storey({}, 0.05, default_lambda_grid()), std::domain_error);
    CHECK_THROWS_AS(storey({0.5}, 1.5, default_lambda_grid()), std::domain_error);
    CHECK_THROWS_AS(storey({0.1, 1.5}, 0.05, default_lambda_grid()), std::domain_error);
    // a bad grid surfaces as the configuration error from the shared validator
    CHECK_THROWS_AS(storey({0.1, 0.5}, 0.05, {0.7}), ConfigError);
    CHECK_THROWS_AS(storey({0.1, 0.5}, 0.05, {}), ConfigError);
}

TEST_CASE("weighted step-up with a flat prior column reduces to plain BH") {
    RngStream rng(43, 0);
    for (double constant : {0.001, 0.3, 0.5, 0.9}) {
        const std::size_t m = 30;
        std::vector<double> p1(m, constant), p2(m);
        for (double& v : p2)
            v = rng.uniform01();
        const PValueTable table(p1, p2);
        const WeightedBhResult result = weighted_bh(table, 0.05);
        for (double w : result.weights)
            CHECK(w == 1.0);
        CHECK(result.rejected == bh(table.p2(), 0.05));
    }
}

TEST_CASE("weighted step-up weights average to one and favor small p1") {
    RngStream rng(44, 0);
    std::vector<double> p1(50), p2(50);
    for (std::size_t i = 0; i < 50; ++i) {
        p1[i] = rng.uniform01();
        p2[i] = rng.uniform01();
    }
    const PValueTable table(p1, p2);
    const WeightedBhResult result = weighted_bh(table, 0.05);

    double mean = 0.0;
    for (double w : result.weights)
        mean += w;
    mean /= 50.0;
    CHECK(std::fabs(mean - 1.0) <= 1e-12);

    const std::size_t smallest =
        std::min_element(table.p1().begin(), table.p1().end()) - table.p1().begin();
    const std::size_t heaviest =
        std::max_element(result.weights.begin(), result.weights.end()) -
        result.weights.begin();
    CHECK(smallest == heaviest);

    CHECK_THROWS_AS(weighted_bh(table, 0.05, std::nan("")), std::domain_error);
    CHECK_THROWS_AS(weighted_bh(table, 0.0), std::domain_error);
}

TEST_CASE("two-stage filter keeps the smallest first-stage rows") {
    const PValueTable table({0.01, 0.5, 0.02, 0.9}, {0.03, 0.01, 0.9, 0.02});
    // keep = 2 -> rows 0 and 2 survive; only row 0 clears the second stage
    CHECK(two_stage(table, 0.1, 0.5) == std::vector<std::size_t>{0});
}

TEST_CASE("two-stage filter breaks first-stage ties by row order") {
    const PValueTable table({0.5, 0.5, 0.5, 0.5}, {0.9, 0.9, 0.01, 0.01});
    // the strong rows 2 and 3 lose the deterministic tie-break and are filtered
    CHECK(two_stage(table, 0.05, 0.5).empty());
}

TEST_CASE("two-stage filter with no filtering equals plain BH") {
    RngStream rng(45, 0);
    std::vector<double> p1(40), p2(40);
    for (std::size_t i = 0; i < 40; ++i) {
        p1[i] = rng.uniform01();
        p2[i] = std::pow(rng.uniform01(), 3.0);
    }
    const PValueTable table(p1, p2);
    CHECK(two_stage(table, 0.05, 0.0) == bh(table.p2(), 0.05));
    CHECK_THROWS_AS(two_stage(table, 0.05, 1.0), std::domain_error);
    CHECK_THROWS_AS(two_stage(table, 0.05, -0.1), std::domain_error);
    CHECK_THROWS_AS(two_stage(table, 0.0, 0.5), std::domain_error);
}

TEST_CASE("mean filter smooths with a clamped three-point window") {
    const auto smoothed = mean_filter_pstar({0.1, 0.4, 0.7});
    REQUIRE(smoothed.size() == 3);
    CHECK(smoothed[0] == (0.1 + 0.1 + 0.4) / 3.0);
    CHECK(smoothed[1] == (0.1 + 0.4 + 0.7) / 3.0);
    CHECK(smoothed[2] == (0.4 + 0.7 + 0.7) / 3.0);

    // a single row is its own window
    CHECK(mean_filter_pstar({0.37}) == std::vector<double>{(0.37 + 0.37 + 0.37) / 3.0});

    CHECK_THROWS_AS(mean_filter_pstar({}), std::domain_error);
    CHECK_THROWS_AS(mean_filter_pstar({0.2, 1.4}), std::domain_error);
}
