#include "simfdr/theory.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "simfdr/error.hpp"
#include "simfdr/null_model.hpp"
#include "simfdr/numeric.hpp"
#include "simfdr/projection.hpp"

namespace simfdr {

namespace {

double half_pi() { return std::acos(0.0); }

struct ProjectedLaw {
    double mu = 0.0;
    double sigma = 1.0;
};

ProjectedLaw projected_law(const GaussianPair& model, double theta) {
    ProjectedLaw law;
    law.mu = model.mean[0] * std::cos(theta) + model.mean[1] * std::sin(theta);
    law.sigma = closed_form_sigma0(theta, model.sd[0], model.sd[1], model.rho);
    if (!(law.sigma > 0.0))
        throw std::domain_error("projected law has a degenerate scale");
    return law;
}

} // namespace

double projected_cdf(const GaussianPair& model, double theta, double t) {
    if (!(theta >= 0.0 && theta <= half_pi()))
        throw std::domain_error("projected_cdf: theta must lie in [0, pi/2]");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("projected_cdf: t must lie in [0, 1]");
    if (t == 0.0)
        return 0.0;
    if (t == 1.0)
        return 1.0;
    const ProjectedLaw law = projected_law(model, theta);
    return std_normal_cdf((std_normal_quantile(t) - law.mu) / law.sigma);
}

ThetaOracleResult theta0_oracle_normal(const GaussianPair& null_model,
                                       const GaussianPair& nonnull_model,
                                       double pi0, double alpha_prime,
                                       std::size_t n_theta) {
    if (!(pi0 > 0.0 && pi0 < 1.0))
        throw std::domain_error("theta0_oracle_normal: pi0 must be in (0, 1)");
    if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
        throw std::domain_error("theta0_oracle_normal: alpha_prime must be in (0, 1)");

    ThetaOracleResult out;
    out.grid = theta_grid(n_theta);
    out.power.resize(out.grid.size());
    const double pi1 = 1.0 - pi0;

    bool have_best = false;
    double best_power = 0.0;
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
        const double theta = out.grid[g];
        const ProjectedLaw null_law = projected_law(null_model, theta);
        const ProjectedLaw nonnull_law = projected_law(nonnull_model, theta);

        // Root of F0 / F = alpha' on the quantile scale: negative on the left
        // of the root, and (1 - alpha') F > 0 at the right end of the bracket.
        const auto ratio_gap = [&](double u) {
            const double f0 = std_normal_cdf((u - null_law.mu) / null_law.sigma);
            const double f1 = std_normal_cdf((u - nonnull_law.mu) / nonnull_law.sigma);
            return f0 - alpha_prime * (pi0 * f0 + pi1 * f1);
        };
        double lo = -12.0, hi = 8.0;
        if (!(ratio_gap(lo) < 0.0))
            throw EstimationError(
                "theta0_oracle_normal: no interior threshold at some direction");
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            (ratio_gap(mid) < 0.0 ? lo : hi) = mid;
        }
        const double u_star = 0.5 * (lo + hi);
        out.power[g] = std_normal_cdf((u_star - nonnull_law.mu) / nonnull_law.sigma);
        if (!have_best || out.power[g] >= best_power) {
            have_best = true;
            best_power = out.power[g];
            out.theta0 = theta;
        }
    }
    return out;
}

RectangleFdrEstimate fdr_rectangle_mc(const GaussianPair& null_model,
                                      const GaussianPair& nonnull_model,
                                      double pi0, double t1, double t2,
                                      std::size_t n, RngStream& rng) {
    if (!(pi0 >= 0.0 && pi0 <= 1.0))
        throw std::domain_error("fdr_rectangle_mc: pi0 must lie in [0, 1]");
    if (!(t1 > 0.0 && t1 <= 1.0) || !(t2 > 0.0 && t2 <= 1.0))
        throw std::domain_error("fdr_rectangle_mc: thresholds must lie in (0, 1]");
    if (n == 0)
        throw std::domain_error("fdr_rectangle_mc: n must be positive");

    const double inf = std::numeric_limits<double>::infinity();
    const double b1 = t1 >= 1.0 ? inf : std_normal_quantile(t1);
    const double b2 = t2 >= 1.0 ? inf : std_normal_quantile(t2);

    const BivariateParams null_params{null_model.mean, null_model.sd, null_model.rho};
    const BivariateParams nonnull_params{nonnull_model.mean, nonnull_model.sd,
                                         nonnull_model.rho};

    RectangleFdrEstimate out;
    for (std::size_t i = 0; i < n; ++i) {
        const bool is_null = rng.uniform01() < pi0;
        const std::array<double, 2> z =
            sample_bivariate_normal(rng, is_null ? null_params : nonnull_params);
        if (z[0] <= b1 && z[1] <= b2) {
            if (is_null)
                ++out.hits_null;
            else
                ++out.hits_nonnull;
        }
    }
    const std::size_t hits = out.hits_null + out.hits_nonnull;
    if (hits == 0) {
        out.fdr = std::numeric_limits<double>::quiet_NaN();
        out.mc_se = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.fdr = static_cast<double>(out.hits_null) / static_cast<double>(hits);
    out.mc_se = std::sqrt(out.fdr * (1.0 - out.fdr) / static_cast<double>(hits));
    return out;
}

double delta_power_ratio(const GaussianPair& null_model,
                         const GaussianPair& nonnull_model,
                         double pi0, double alpha, double theta) {
    const double hp = half_pi();
    if (!(theta >= 0.0 && theta <= hp))
        throw std::domain_error("delta_power_ratio: theta must lie in [0, pi/2]");
    if (!(pi0 > 0.0 && pi0 < 1.0))
        throw std::domain_error("delta_power_ratio: pi0 must be in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("delta_power_ratio: alpha must be in (0, 1)");
    if (theta == hp)
        return 1.0;

    const double pi1 = 1.0 - pi0;
    const double mu02 = null_model.mean[1], s02 = null_model.sd[1];
    const double mu12 = nonnull_model.mean[1], s12 = nonnull_model.sd[1];
    if (!(s02 > 0.0 && s12 > 0.0))
        throw std::domain_error("delta_power_ratio: degenerate second-column scale");

    // Threshold of the single-column rule at nominal level alpha.
    const auto level_gap = [&](double u) {
        const double f0 = std_normal_cdf((u - mu02) / s02);
        const double f1 = std_normal_cdf((u - mu12) / s12);
        return pi0 * f0 - alpha * (pi0 * f0 + pi1 * f1);
    };
    double lo = -12.0, hi = 8.0;
    if (!(level_gap(lo) < 0.0) || !(level_gap(hi) > 0.0))
        throw EstimationError("delta_power_ratio: level equation has no root");
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (level_gap(mid) < 0.0 ? lo : hi) = mid;
    }
    const double q = 0.5 * (lo + hi);

    // Densities of the second-column p-value at the threshold, per component.
    const double f0 = std_normal_pdf((q - mu02) / s02) / (s02 * std_normal_pdf(q));
    const double f1 = std_normal_pdf((q - mu12) / s12) / (s12 * std_normal_pdf(q));
    const double beta_prime = (1.0 / alpha - 1.0) * pi0 / pi1;
    const double denom = f1 - beta_prime * f0;
    if (denom == 0.0)
        throw EstimationError("delta_power_ratio: expansion denominator vanishes");

    const double cap_f0 = std_normal_cdf((q - mu02) / s02);

    // Difference of the conditional first-score means given the second score
    // sits at the threshold, null minus nonnull.
    const double cond_null =
        null_model.mean[0] + null_model.rho * null_model.sd[0] / s02 * (q - mu02);
    const double cond_nonnull =
        nonnull_model.mean[0] +
        nonnull_model.rho * nonnull_model.sd[0] / s12 * (q - mu12);
    const double side_info = cond_null - cond_nonnull;

    const double delta = std_normal_pdf(q) * f1 * f0 / denom * (theta - hp) /
                         cap_f0 * side_info;
    return 1.0 + delta;
}

} // namespace simfdr
