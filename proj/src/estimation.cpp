#include "simfdr/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "simfdr/error.hpp"

namespace simfdr {

std::vector<double> default_lambda_grid() {
    return {0.02,  0.04,  0.06,  0.08,  0.10,  0.125, 0.15,
            0.175, 0.20,  0.225, 0.25,  0.275, 0.30,  0.325,
            0.35,  0.375, 0.40,  0.425, 0.45,  0.475, 0.50};
}

void validate_lambda_grid(const std::vector<double>& grid) {
    if (grid.empty())
        throw ConfigError("lambda grid must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] <= 0.5))
            throw ConfigError("lambda grid values must lie in (0, 1/2]");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ConfigError("lambda grid must be strictly increasing");
    }
}

Pi0Estimate pi0_hat(const ProjectedSample& sample, const NullCdf& null_cdf,
                    const std::vector<double>& lambda_grid) {
    validate_lambda_grid(lambda_grid);
    const std::size_t m = sample.values.size();
    if (m == 0)
        throw std::domain_error("pi0_hat: sample must not be empty");

    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n = lambda_grid.size();
    std::vector<double> estimates(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = lambda_grid[j];
        const auto above =
            sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lambda);
        const double denom = (1.0 - null_cdf(lambda)) * static_cast<double>(m);
        if (!(denom > 0.0))
            throw EstimationError("pi0_hat: null distribution saturates at lambda");
        estimates[j] = static_cast<double>(above) / denom;
    }

    // Walk the grid starting from the implicit lambda_0 = 0 (estimate 1) and
    // stop at the first value whose estimate does not decrease; the last grid
    // value is the fallback when the sequence decreases throughout.
    std::size_t chosen = n - 1;
    double prev = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (estimates[j] >= prev) {
            chosen = j;
            break;
        }
        prev = estimates[j];
    }

    Pi0Estimate out;
    out.lambda = lambda_grid[chosen];
    out.pi0 = std::min(std::max(estimates[chosen], 1.0 / static_cast<double>(m)), 1.0);
    return out;
}

namespace {

struct ScanOutcome {
    double threshold = 0.0;
    std::size_t rejections = 0;
};

// Walk the ascending distinct values keeping the largest t with
// scale * F0(t) <= level * R(t), where R counts every value <= t. Once
// scale * F0(t) exceeds level * m no later candidate can qualify (F0 is
// nondecreasing and R is at most m), so the scan stops there. t = 0 is
// always admissible and is the fallback threshold.
ScanOutcome scan_threshold(const std::vector<double>& sorted, const NullCdf& null_cdf,
                           double scale, double level) {
    ScanOutcome best;
    const std::size_t m = sorted.size();
    const double cap = level * static_cast<double>(m);
    std::size_t i = 0;
    while (i < m) {
        const double value = sorted[i];
        std::size_t j = i + 1;
        while (j < m && sorted[j] == value) ++j;
        const double num = scale * null_cdf(value);
        if (num > cap)
            break;
        if (num <= level * static_cast<double>(j)) {
            best.threshold = value;
            best.rejections = j;
        }
        i = j;
    }
    return best;
}

std::vector<double> sorted_values(const ProjectedSample& sample, const char* caller) {
    if (sample.values.empty())
        throw std::domain_error(std::string(caller) + ": sample must not be empty");
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

// The parametric fit works on the projection scores themselves rather than
// quantiles of the (clamped) projected p-values, so extreme rows keep their
// true magnitude in the scale estimate.
NullCdf null_cdf_at(const PValueTable& table, const ProjectedSample& sample,
                    double theta, NullMethod method, double trim_c) {
    switch (method) {
        case NullMethod::parametric:
            return NullCdf::parametric_from_scores(projected_scores(table, theta), trim_c);
        case NullMethod::nonparametric:
            return NullCdf::nonparametric_from_sample(sample);
        case NullMethod::identity:
            return NullCdf::identity();
    }
    throw std::logic_error("null_cdf_at: unknown null method");
}

} // namespace

double threshold_star(const ProjectedSample& sample, const NullCdf& null_cdf,
                      double alpha_prime) {
    if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
        throw std::domain_error("threshold_star: alpha_prime must be in (0, 1)");
    const std::vector<double> sorted = sorted_values(sample, "threshold_star");
    return scan_threshold(sorted, null_cdf, static_cast<double>(sorted.size()), alpha_prime)
        .threshold;
}

double threshold_alpha(const ProjectedSample& sample, const NullCdf& null_cdf,
                       double pi0, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("threshold_alpha: alpha must be in (0, 1)");
    if (!(pi0 > 0.0 && pi0 <= 1.0))
        throw std::domain_error("threshold_alpha: pi0 must be in (0, 1]");
    const std::vector<double> sorted = sorted_values(sample, "threshold_alpha");
    return scan_threshold(sorted, null_cdf, pi0 * static_cast<double>(sorted.size()), alpha)
        .threshold;
}

double fdr_hat(const ProjectedSample& sample, const NullCdf& null_cdf,
               double pi0, double t) {
    if (!(pi0 > 0.0 && pi0 <= 1.0))
        throw std::domain_error("fdr_hat: pi0 must be in (0, 1]");
    const std::size_t m = sample.values.size();
    if (m == 0)
        throw std::domain_error("fdr_hat: sample must not be empty");
    const double f0 = null_cdf(t);
    std::size_t r = 0;
    for (double v : sample.values)
        if (v <= t) ++r;
    return pi0 * f0 * static_cast<double>(m) / static_cast<double>(std::max<std::size_t>(r, 1));
}

NullCdf make_null_cdf(const ProjectedSample& sample, NullMethod method, double trim_c) {
    switch (method) {
        case NullMethod::parametric:
            return NullCdf::parametric_from_sample(sample, trim_c);
        case NullMethod::nonparametric:
            return NullCdf::nonparametric_from_sample(sample);
        case NullMethod::identity:
            return NullCdf::identity();
    }
    throw std::logic_error("make_null_cdf: unknown null method");
}

ThetaSelection select_theta(const PValueTable& table, double alpha_prime,
                            const std::vector<double>& grid, NullMethod method,
                            double trim_c) {
    if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
        throw std::domain_error("select_theta: alpha_prime must be in (0, 1)");
    if (grid.empty())
        throw std::domain_error("select_theta: theta grid must not be empty");

    ThetaSelection out;
    out.per_theta.reserve(grid.size());
    const double m = static_cast<double>(table.size());

    bool have_best = false;
    std::size_t best_rejections = 0;
    std::vector<double> sorted;
    for (double theta : grid) {
        const ProjectedSample sample = project_all(table, theta);
        const NullCdf null_cdf = null_cdf_at(table, sample, theta, method, trim_c);
        sorted = sample.values;
        std::sort(sorted.begin(), sorted.end());
        const ScanOutcome scan = scan_threshold(sorted, null_cdf, m, alpha_prime);
        out.per_theta.push_back({theta, scan.threshold, scan.rejections});
        if (!have_best || scan.rejections > best_rejections ||
            (scan.rejections == best_rejections && theta > out.theta_hat)) {
            have_best = true;
            best_rejections = scan.rejections;
            out.theta_hat = theta;
        }
    }
    return out;
}

DecisionReport run_sim_procedure(const PValueTable& table, const ProcedureConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw ConfigError("alpha must be in (0, 1)");
    const double alpha_prime = config.alpha_prime.value_or(config.alpha);
    if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
        throw ConfigError("alpha_prime must be in (0, 1)");
    if (!(config.trim_c >= 0.0))
        throw ConfigError("trim_c must be nonnegative");
    if (config.want_fdr_curve && config.fdr_curve_max_points < 2)
        throw ConfigError("fdr_curve_max_points must be at least 2");
    validate_lambda_grid(config.lambda_grid);

    std::vector<double> grid;
    if (config.theta_grid_override) {
        grid = *config.theta_grid_override;
        if (grid.empty())
            throw ConfigError("theta grid override must not be empty");
        const double half_pi = std::acos(0.0);
        for (double theta : grid)
            if (!(theta >= 0.0 && theta <= half_pi))
                throw ConfigError("theta grid values must lie in [0, pi/2]");
    } else {
        if (config.theta_points < 2)
            throw ConfigError("theta_points must be at least 2");
        grid = theta_grid(config.theta_points);
    }

    ThetaSelection selection =
        select_theta(table, alpha_prime, grid, config.method, config.trim_c);

    DecisionReport report;
    report.method = config.method;
    report.theta_hat = selection.theta_hat;
    report.theta_diagnostics = std::move(selection.per_theta);

    const ProjectedSample sample = project_all(table, report.theta_hat);
    const NullCdf null_cdf =
        null_cdf_at(table, sample, report.theta_hat, config.method, config.trim_c);

    const Pi0Estimate pi0 = pi0_hat(sample, null_cdf, config.lambda_grid);
    report.pi0_hat = pi0.pi0;
    report.lambda = pi0.lambda;

    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(table.size());
    const ScanOutcome scan = scan_threshold(sorted, null_cdf, m * pi0.pi0, config.alpha);
    report.threshold = scan.threshold;

    report.rejected.reserve(scan.rejections);
    for (std::size_t i = 0; i < sample.values.size(); ++i)
        if (sample.values[i] <= report.threshold)
            report.rejected.push_back(i);

    if (config.want_fdr_curve) {
        std::vector<double> distinct = sorted;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        const std::size_t k = distinct.size();
        const std::size_t cap = config.fdr_curve_max_points;
        std::vector<std::size_t> picks;
        if (k <= cap) {
            picks.resize(k);
            for (std::size_t j = 0; j < k; ++j) picks[j] = j;
        } else {
            picks.reserve(cap);
            for (std::size_t j = 0; j < cap; ++j) {
                const std::size_t idx = j * (k - 1) / (cap - 1);
                if (picks.empty() || idx != picks.back())
                    picks.push_back(idx);
            }
        }
        report.fdr_curve.reserve(picks.size());
        for (std::size_t idx : picks) {
            const double t = distinct[idx];
            const double r = static_cast<double>(
                std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
            report.fdr_curve.emplace_back(
                t, pi0.pi0 * null_cdf(t) * m / std::max(r, 1.0));
        }
    }

    return report;
}

} // namespace simfdr
