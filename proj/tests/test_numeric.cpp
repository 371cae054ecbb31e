#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "simfdr/numeric.hpp"

#include "support/oracles.hpp"

using namespace simfdr;

TEST_CASE("standard normal cdf matches the series/continued-fraction oracle") {
    for (int i = -80; i <= 80; ++i) {
        const double x = i / 10.0;
        CAPTURE(x);
        CHECK(std::fabs(std_normal_cdf(x) - oracle::phi(x)) <= 1e-13);
    }
    // deep tails: relative agreement is what matters there
    for (double x : {-37.0, -30.0, -20.0, -12.0}) {
        const double want = oracle::phi(x);
        CHECK(std::fabs(std_normal_cdf(x) - want) <= 1e-12 * want);
    }
    CHECK(std_normal_cdf(0.0) == 0.5);
}

TEST_CASE("standard normal cdf at fixed points") {
    CHECK(std_normal_cdf(-2.0) == doctest::Approx(0.022750131948179195).epsilon(1e-14));
    CHECK(std_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
}

TEST_CASE("standard normal pdf") {
    CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(std_normal_pdf(2.0) ==
          doctest::Approx(0.3989422804014327 * std::exp(-2.0)).epsilon(1e-14));
    CHECK(std_normal_pdf(-3.5) == std_normal_pdf(3.5));
}

TEST_CASE("standard normal quantile inverts the cdf") {
    CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(std_normal_quantile(0.5) == 0.0);
    for (int i = 1; i <= 39; ++i) {
        const double p = i / 40.0;
        CHECK(std_normal_quantile(p) == doctest::Approx(oracle::phi_inv(p)).epsilon(1e-12));
        CHECK(std_normal_cdf(std_normal_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
    }
    // extreme but representable probabilities
    for (double p : {1e-12, 1e-9, 1.0 - 1e-9}) {
        CHECK(std_normal_cdf(std_normal_quantile(p)) ==
              doctest::Approx(p).epsilon(1e-10));
    }
    CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(-0.2), std::domain_error);
}

TEST_CASE("student t cdf against closed forms and quadrature") {
    CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-14));  // Cauchy
    CHECK(student_t_cdf(0.0, 5) == 0.5);
    CHECK(student_t_cdf(1.0, 3) == doctest::Approx(0.8044988905221148).epsilon(1e-13));
    for (int df : {1, 2, 3, 7, 18, 50}) {
        for (double x : {-4.0, -1.3, -0.2, 0.9, 2.5, 6.0}) {
            CHECK(student_t_cdf(x, df) ==
                  doctest::Approx(oracle::t_cdf(x, df)).epsilon(1e-11));
        }
    }
    // symmetry
    CHECK(student_t_cdf(-2.2, 9) == doctest::Approx(1.0 - student_t_cdf(2.2, 9)).epsilon(1e-14));
    CHECK_THROWS_AS(student_t_cdf(1.0, 0), std::domain_error);
}

TEST_CASE("student t quantile inverts the cdf") {
    for (int df : {1, 3, 18}) {
        for (double p : {0.005, 0.1, 0.5, 0.9, 0.995}) {
            CHECK(student_t_cdf(student_t_quantile(p, df), df) ==
                  doctest::Approx(p).epsilon(1e-11));
        }
    }
    CHECK(student_t_quantile(0.5, 7) == 0.0);
    CHECK_THROWS_AS(student_t_quantile(0.0, 3), std::domain_error);
    CHECK_THROWS_AS(student_t_quantile(1.0, 3), std::domain_error);
}

TEST_CASE("chi-square cdf against closed forms and quadrature") {
    CHECK(chi_square_cdf(2.0, 2) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(chi_square_cdf(0.0, 4) == 0.0);
    for (int df : {1, 2, 5, 19}) {
        for (double x : {0.3, 1.0, 4.5, 12.0, 30.0}) {
            CHECK(chi_square_cdf(x, df) ==
                  doctest::Approx(oracle::chi2_cdf(x, df)).epsilon(1e-11));
        }
    }
    CHECK_THROWS_AS(chi_square_cdf(1.0, 0), std::domain_error);
    CHECK(chi_square_cdf(-3.0, 2) == 0.0);
}

TEST_CASE("regularized lower gamma basic identities") {
    // P(1, x) = 1 - exp(-x)
    for (double x : {0.1, 1.0, 5.0})
        CHECK(regularized_lower_gamma(1.0, x) ==
              doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
    CHECK(regularized_lower_gamma(2.5, 0.0) == 0.0);
    // large-x saturation
    CHECK(regularized_lower_gamma(2.0, 60.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("regularized incomplete beta symmetry and fixed points") {
    // I_x(a, b) = 1 - I_{1-x}(b, a)
    for (double x : {0.05, 0.3, 0.7}) {
        CHECK(regularized_incomplete_beta(2.0, 5.0, x) ==
              doctest::Approx(1.0 - regularized_incomplete_beta(5.0, 2.0, 1.0 - x))
                  .epsilon(1e-13));
    }
    // I_x(1, 1) = x
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(3.0, 4.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(3.0, 4.0, 1.0) == 1.0);
}
