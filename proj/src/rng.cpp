#include "simfdr/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "simfdr/numeric.hpp"

namespace simfdr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
    // Hash the (seed, stream) pair so nearby indices give unrelated states.
    std::uint64_t mix = master_seed;
    (void)splitmix64(mix);
    mix ^= 0x6a09e667f3bcc909ULL + stream_index;
    for (auto& word : state_) word = splitmix64(mix);
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() {
    // 53-bit mantissa shifted into the open interval.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("uniform_below: n must be >= 1");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RngStream::normal() {
    return std_normal_quantile(uniform01());
}

double RngStream::gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost a Gamma(shape + 1) draw down (Marsaglia-Tsang section 6).
        const double u = uniform01();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        const double x = normal();
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double RngStream::chi_square(double df) {
    if (!(df > 0.0)) throw std::domain_error("chi_square: df must be positive");
    return 2.0 * gamma(0.5 * df);
}

std::array<double, 2> sample_bivariate_normal(RngStream& rng, const BivariateParams& par) {
    if (!(par.sd[0] >= 0.0) || !(par.sd[1] >= 0.0))
        throw std::domain_error("sample_bivariate_normal: scales must be nonnegative");
    if (!(std::fabs(par.rho) <= 1.0))
        throw std::domain_error("sample_bivariate_normal: |rho| must be <= 1");
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    // Cholesky factor of [[s1^2, rho s1 s2], [rho s1 s2, s2^2]].
    const double x1 = par.mean[0] + par.sd[0] * z1;
    const double x2 = par.mean[1] + par.sd[1] * (par.rho * z1 + std::sqrt(1.0 - par.rho * par.rho) * z2);
    return {x1, x2};
}

std::array<double, 2> sample_bivariate_t(RngStream& rng, const BivariateParams& par, int df) {
    if (df < 1) throw std::domain_error("sample_bivariate_t: df must be >= 1");
    BivariateParams centered = par;
    centered.mean = {0.0, 0.0};
    const auto z = sample_bivariate_normal(rng, centered);
    const double w = rng.chi_square(static_cast<double>(df));
    const double scale = std::sqrt(static_cast<double>(df) / w);
    return {par.mean[0] + scale * z[0], par.mean[1] + scale * z[1]};
}

} // namespace simfdr
