#include "simfdr/null_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "simfdr/error.hpp"
#include "simfdr/numeric.hpp"

namespace simfdr {

double estimate_sigma0(const std::vector<double>& z_values, double trim_c) {
    if (std::isnan(trim_c) || trim_c < 0.0)
        throw std::domain_error("estimate_sigma0: trim threshold must be >= 0");
    // Z* = {-z : z >= c} u {z : -c < z <= c} u {z : z > c}; rms with divisor |Z*|.
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (const double z : z_values) {
        if (std::isnan(z))
            throw std::domain_error("estimate_sigma0: NaN z-value");
        if (z >= trim_c) { sum_sq += z * z; ++n; }        // imputed mirror -z
        if (z > -trim_c && z <= trim_c) { sum_sq += z * z; ++n; }
        if (z > trim_c) { sum_sq += z * z; ++n; }
    }
    if (n == 0)
        throw EstimationError("estimate_sigma0: no usable z-values after trimming");
    const double sigma = std::sqrt(sum_sq / static_cast<double>(n));
    if (!(sigma > 0.0))
        throw EstimationError("estimate_sigma0: degenerate (all-zero) z-values");
    return sigma;
}

double closed_form_sigma0(double theta, double s1, double s2, double rho0) {
    if (!(s1 >= 0.0) || !(s2 >= 0.0))
        throw std::domain_error("closed_form_sigma0: scales must be nonnegative");
    if (!(std::fabs(rho0) <= 1.0))
        throw std::domain_error("closed_form_sigma0: |rho0| must be <= 1");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double var = c * c * s1 * s1 + s * s * s2 * s2 + 2.0 * rho0 * s1 * s2 * c * s;
    return std::sqrt(std::max(var, 0.0));
}

NullCdf NullCdf::parametric(double sigma0) {
    if (!(sigma0 > 0.0))
        throw std::domain_error("NullCdf::parametric: sigma0 must be positive");
    NullCdf cdf;
    cdf.kind_ = Kind::parametric;
    cdf.sigma0_ = sigma0;
    return cdf;
}

NullCdf NullCdf::parametric_from_scores(const std::vector<double>& z_values, double trim_c) {
    return parametric(estimate_sigma0(z_values, trim_c));
}

NullCdf NullCdf::parametric_from_sample(const ProjectedSample& sample, double trim_c) {
    std::vector<double> z(sample.values.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = std_normal_quantile(sample.values[i]);
    return parametric_from_scores(z, trim_c);
}

NullCdf NullCdf::nonparametric_from_sample(const ProjectedSample& sample) {
    NullCdf cdf;
    cdf.kind_ = Kind::nonparametric;
    cdf.sorted_ = sample.values;
    std::sort(cdf.sorted_.begin(), cdf.sorted_.end());
    std::size_t above = 0, at = 0;
    for (const double p : cdf.sorted_) {
        if (p > 0.5) ++above;
        else if (p == 0.5) ++at;
    }
    cdf.denom_ = 2.0 * static_cast<double>(above) + static_cast<double>(at);
    if (cdf.denom_ == 0.0)
        throw EstimationError("NullCdf: degenerate sample, no mass at or above 1/2");
    return cdf;
}

NullCdf NullCdf::identity() {
    NullCdf cdf;
    cdf.kind_ = Kind::identity;
    return cdf;
}

NullCdf NullCdf::mean_of_three_uniforms() {
    NullCdf cdf;
    cdf.kind_ = Kind::mean3_uniform;
    return cdf;
}

double NullCdf::sigma0() const {
    if (kind_ != Kind::parametric)
        throw std::logic_error("NullCdf::sigma0: not a parametric estimate");
    return sigma0_;
}

double NullCdf::operator()(double t) const {
    if (std::isnan(t) || t < 0.0 || t > 1.0)
        throw std::domain_error("NullCdf: t must lie in [0, 1]");
    switch (kind_) {
        case Kind::identity:
            return t;
        case Kind::parametric:
            if (t == 0.0) return 0.0;
            if (t == 1.0) return 1.0;
            return std_normal_cdf(std_normal_quantile(t) / sigma0_);
        case Kind::nonparametric: {
            const auto count_ge = [this](double x) {
                return static_cast<double>(
                    sorted_.end() - std::lower_bound(sorted_.begin(), sorted_.end(), x));
            };
            if (t <= 0.5) return count_ge(1.0 - t) / denom_;
            return 1.0 - count_ge(t) / denom_;
        }
        case Kind::mean3_uniform: {
            // P((U1 + U2 + U3) / 3 <= t), the scaled sum-of-uniforms form.
            const double s = 3.0 * t;
            const auto cube = [](double x) { return x * x * x; };
            double v = cube(s);
            if (s > 1.0) v -= 3.0 * cube(s - 1.0);
            if (s > 2.0) v += 3.0 * cube(s - 2.0);
            return v / 6.0;
        }
    }
    return 0.0;  // unreachable
}

double null_density_oracle(double p1, double p2, double rho0, NullFamily family, int df) {
    if (!(std::fabs(rho0) < 1.0))
        throw std::domain_error("null_density_oracle: |rho0| must be < 1");
    p1 = clamp_probability(p1);
    p2 = clamp_probability(p2);
    const double r2 = 1.0 - rho0 * rho0;

    if (family == NullFamily::normal) {
        const double u1 = std_normal_quantile(p1);
        const double u2 = std_normal_quantile(p2);
        const double quad = rho0 * rho0 * u1 * u1 - 2.0 * rho0 * u1 * u2 + rho0 * rho0 * u2 * u2;
        return std::exp(-quad / (2.0 * r2)) / std::sqrt(r2);
    }

    if (df < 1) throw std::domain_error("null_density_oracle: df must be >= 1");
    const double v = static_cast<double>(df);
    const double w1 = student_t_quantile(p1, df);
    const double w2 = student_t_quantile(p2, df);
    const double log_const = 2.0 * std::lgamma(0.5 * v) + std::log(v) - std::log(2.0) -
                             2.0 * std::lgamma(0.5 * (v + 1.0)) - 0.5 * std::log(r2);
    const double joint = -0.5 * (v + 2.0) *
        std::log1p((w1 * w1 - 2.0 * rho0 * w1 * w2 + w2 * w2) / (v * r2));
    const double marg = -0.5 * (v + 1.0) *
        (std::log1p(w1 * w1 / v) + std::log1p(w2 * w2 / v));
    return std::exp(log_const + joint - marg);
}

} // namespace simfdr
