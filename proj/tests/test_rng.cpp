#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "simfdr/numeric.hpp"
#include "simfdr/rng.hpp"

#include "support/oracles.hpp"

using namespace simfdr;

TEST_CASE("generator reproduces the reference xoshiro256++ sequence") {
    for (auto [seed, stream] : {std::pair<std::uint64_t, std::uint64_t>{1, 0}, {42, 7}}) {
        RngStream rng(seed, stream);
        oracle::ReferenceXoshiro reference(seed, stream);
        for (int i = 0; i < 64; ++i) {
            CAPTURE(seed);
            CAPTURE(stream);
            CAPTURE(i);
            CHECK(rng.next_u64() == reference.next());
        }
    }
}

TEST_CASE("uniform01 is the documented 53-bit mapping of the raw stream") {
    RngStream draws(5, 1);
    RngStream raw(5, 1);
    for (int i = 0; i < 32; ++i) {
        const double expected =
            (static_cast<double>(raw.next_u64() >> 11) + 0.5) * 0x1.0p-53;
        CHECK(draws.uniform01() == expected);
    }
}

TEST_CASE("uniform01 stays inside the open unit interval and looks uniform") {
    RngStream rng(11, 0);
    const int n = 2000;
    std::vector<double> u(n);
    for (double& v : u) {
        v = rng.uniform01();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    CHECK(oracle::ks_uniform(u) < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform_below uses the multiply-shift reduction") {
    RngStream draws(9, 3);
    RngStream raw(9, 3);
    for (int i = 0; i < 32; ++i) {
        const std::uint64_t expected = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(raw.next_u64()) * 10) >> 64);
        CHECK(draws.uniform_below(10) == expected);
    }
    CHECK_THROWS_AS(draws.uniform_below(0), std::domain_error);
}

TEST_CASE("uniform_below covers all buckets roughly evenly") {
    RngStream rng(12, 0);
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t k = rng.uniform_below(4);
        REQUIRE(k < 4);
        ++counts[k];
    }
    for (int c : counts) {
        CHECK(c > 2200);
        CHECK(c < 2800);
    }
}

TEST_CASE("normal draws are the quantile transform of uniform01") {
    RngStream draws(6, 2);
    RngStream raw(6, 2);
    for (int i = 0; i < 32; ++i)
        CHECK(draws.normal() == std_normal_quantile(raw.uniform01()));
}

TEST_CASE("probability transform of normal draws is uniform") {
    RngStream rng(13, 0);
    const int n = 2000;
    std::vector<double> u(n);
    for (double& v : u)
        v = std_normal_cdf(rng.normal());
    CHECK(oracle::ks_uniform(u) < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gamma and chi-square draws have the right means") {
    RngStream rng(14, 0);
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rng.gamma(2.5);
    CHECK(sum / n == doctest::Approx(2.5).epsilon(0.02));

    sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rng.chi_square(5.0);
    CHECK(sum / n == doctest::Approx(5.0).epsilon(0.02));

    // shapes below one go through the boosting branch
    sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rng.gamma(0.4);
    CHECK(sum / n == doctest::Approx(0.4).epsilon(0.05));

    CHECK_THROWS_AS(rng.gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(rng.chi_square(-1.0), std::domain_error);
}

TEST_CASE("bivariate normal draws hit the requested moments") {
    RngStream rng(15, 0);
    BivariateParams par;
    par.mean = {1.0, -2.0};
    par.sd = {2.0, 0.5};
    par.rho = 0.6;
    const int n = 20000;
    double m1 = 0, m2 = 0, s11 = 0, s22 = 0, s12 = 0;
    std::vector<std::array<double, 2>> xs(n);
    for (auto& x : xs) {
        x = sample_bivariate_normal(rng, par);
        m1 += x[0];
        m2 += x[1];
    }
    m1 /= n;
    m2 /= n;
    for (const auto& x : xs) {
        s11 += (x[0] - m1) * (x[0] - m1);
        s22 += (x[1] - m2) * (x[1] - m2);
        s12 += (x[0] - m1) * (x[1] - m2);
    }
    CHECK(m1 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(m2 == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(std::sqrt(s11 / (n - 1)) == doctest::Approx(2.0).epsilon(0.03));
    CHECK(std::sqrt(s22 / (n - 1)) == doctest::Approx(0.5).epsilon(0.03));
    CHECK(s12 / std::sqrt(s11 * s22) == doctest::Approx(0.6).epsilon(0.04));

    BivariateParams bad = par;
    bad.rho = 1.5;
    CHECK_THROWS_AS(sample_bivariate_normal(rng, bad), std::domain_error);
    bad = par;
    bad.sd = {-1.0, 1.0};
    CHECK_THROWS_AS(sample_bivariate_normal(rng, bad), std::domain_error);
}

TEST_CASE("bivariate t draws share one chi-square divisor per row") {
    // With df = 3 the marginals are t(3); check the probability transform.
    RngStream rng(16, 0);
    BivariateParams par;
    par.rho = 0.2;
    const int n = 4000;
    std::vector<double> u1(n), u2(n);
    for (int i = 0; i < n; ++i) {
        const auto x = sample_bivariate_t(rng, par, 3);
        u1[i] = student_t_cdf(x[0], 3);
        u2[i] = student_t_cdf(x[1], 3);
    }
    CHECK(oracle::ks_uniform(u1) < 1.63 / std::sqrt(static_cast<double>(n)));
    CHECK(oracle::ks_uniform(u2) < 1.63 / std::sqrt(static_cast<double>(n)));
    CHECK_THROWS_AS(sample_bivariate_t(rng, par, 0), std::domain_error);
}

TEST_CASE("streams are deterministic and distinct") {
    RngStream a(1234, 5);
    RngStream b(1234, 5);
    RngStream c(1234, 6);
    RngStream d(1235, 5);
    bool diff_stream = false, diff_seed = false;
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        diff_stream = diff_stream || va != c.next_u64();
        diff_seed = diff_seed || va != d.next_u64();
    }
    CHECK(diff_stream);
    CHECK(diff_seed);
}
