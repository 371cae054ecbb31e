#pragma once

#include <array>
#include <cstdint>

namespace simfdr {

// Seeded random stream. The pair (master_seed, stream_index) fully determines
// the sequence, so replications indexed off one master seed are reproducible
// regardless of scheduling or worker count. Distinct stream indices are
// decorrelated by hashing the pair through splitmix64 into a xoshiro256++
// state. All real-valued draws are built from the raw 64-bit output with
// pinned algorithms (inverse-CDF normals, Marsaglia-Tsang gamma), so the
// sequence is identical across platforms and compilers.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64();

    // Uniform draw in the open interval (0, 1).
    double uniform01();

    // Integer in [0, n), n >= 1 (Lemire multiply-shift).
    std::uint64_t uniform_below(std::uint64_t n);

    // Standard normal via the inverse-CDF transform (one uniform per draw).
    double normal();

    // Gamma(shape, scale 1), shape > 0.
    double gamma(double shape);

    // Chi-square with df > 0 degrees of freedom.
    double chi_square(double df);

private:
    std::uint64_t state_[4];
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
};

// Parameters of a bivariate location/scale family on the normal-score plane:
// marginal means, marginal scales, correlation.
struct BivariateParams {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> sd{1.0, 1.0};
    double rho = 0.0;
};

// Draw (x1, x2) from the bivariate normal with the given parameters.
// Requires sd >= 0 and |rho| <= 1 (Cholesky of the implied covariance).
std::array<double, 2> sample_bivariate_normal(RngStream& rng, const BivariateParams& par);

// Draw from the bivariate t with df degrees of freedom: a bivariate
// normal(0, Sigma) draw scaled by sqrt(df / W) with one shared W ~ chi^2_df,
// then shifted by the mean; the marginals are location-shifted t_df.
std::array<double, 2> sample_bivariate_t(RngStream& rng, const BivariateParams& par, int df);

} // namespace simfdr
