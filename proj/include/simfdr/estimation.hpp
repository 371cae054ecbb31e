#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "simfdr/null_model.hpp"
#include "simfdr/projection.hpp"

namespace simfdr {

// Candidate lambda values for the pi0 estimate:
// {0.02, 0.04, 0.06, 0.08, 0.10, 0.125, 0.15, 0.175, ..., 0.5}.
std::vector<double> default_lambda_grid();

// Grids must be strictly increasing with every value in (0, 1/2].
void validate_lambda_grid(const std::vector<double>& grid);

struct Pi0Estimate {
    double pi0 = 1.0;
    double lambda = 0.0;
};

// pi0(lambda) = #{p_i > lambda} / ((1 - F0(lambda)) m), evaluated along the
// grid with lambda_0 = 0 prepended; the chosen lambda is the first grid value
// whose pi0 does not decrease from its predecessor, falling back to the last
// grid value. The returned pi0 is clamped to [1/m, 1].
Pi0Estimate pi0_hat(const ProjectedSample& sample, const NullCdf& null_cdf,
                    const std::vector<double>& lambda_grid);

// Largest observed value t (0 if none) with m * F0(t) / max(R(t), 1) <= alpha_prime,
// where R(t) = #{p_i <= t}. Equals the supremum-rule threshold because the
// estimate is minimized over each inter-order-statistic interval at its left
// endpoint, so the scan over observed values preserves the rejection set.
double threshold_star(const ProjectedSample& sample, const NullCdf& null_cdf,
                      double alpha_prime);

// Same scan with the pi0-corrected numerator m * pi0 * F0(t).
double threshold_alpha(const ProjectedSample& sample, const NullCdf& null_cdf,
                       double pi0, double alpha);

// Plug-in FDR estimate pi0 * F0(t) / ((R(t) v 1) / m) at threshold t.
double fdr_hat(const ProjectedSample& sample, const NullCdf& null_cdf,
               double pi0, double t);

enum class NullMethod { parametric, nonparametric, identity };

NullCdf make_null_cdf(const ProjectedSample& sample, NullMethod method, double trim_c = 0.0);

struct ThetaDiagnostic {
    double theta = 0.0;
    double threshold = 0.0;
    std::size_t rejections = 0;
};

struct ThetaSelection {
    double theta_hat = 0.0;
    std::vector<ThetaDiagnostic> per_theta;
};

// Data-driven direction: project along every grid direction, run the
// alpha_prime-level scan against the method's null estimate, and pick the
// direction with the most rejections; ties go to the largest theta.
ThetaSelection select_theta(const PValueTable& table, double alpha_prime,
                            const std::vector<double>& grid, NullMethod method,
                            double trim_c = 0.0);

struct ProcedureConfig {
    double alpha = 0.05;
    std::optional<double> alpha_prime;  // defaults to alpha
    NullMethod method = NullMethod::nonparametric;
    std::size_t theta_points = 101;
    std::optional<std::vector<double>> theta_grid_override;
    std::vector<double> lambda_grid = default_lambda_grid();
    double trim_c = 0.0;
    bool want_fdr_curve = false;
    std::size_t fdr_curve_max_points = 400;
};

struct DecisionReport {
    double theta_hat = 0.0;
    double pi0_hat = 1.0;
    double lambda = 0.0;
    double threshold = 0.0;
    std::vector<std::size_t> rejected;  // ascending row indices
    std::vector<std::pair<double, double>> fdr_curve;  // (t, estimate)
    NullMethod method = NullMethod::nonparametric;
    std::vector<ThetaDiagnostic> theta_diagnostics;
};

// The full pipeline: select theta over the grid at level alpha_prime,
// re-estimate the null and pi0 at the chosen direction, scan for the
// alpha-level threshold, and report the rejection set.
DecisionReport run_sim_procedure(const PValueTable& table, const ProcedureConfig& config);

} // namespace simfdr
