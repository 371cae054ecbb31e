#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "simfdr/rng.hpp"

namespace simfdr {

// Law of the normal scores (Phi^{-1}(p1), Phi^{-1}(p2)) under one mixture
// component: marginal means, marginal standard deviations, correlation.
struct GaussianPair {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> sd{1.0, 1.0};
    double rho = 0.0;
};

// Population CDF of the projected p-value under one component:
// F(t; theta) = Phi((Phi^{-1}(t) - mu(theta)) / sigma(theta)) with
// mu(theta) = mu1 cos + mu2 sin and sigma(theta) from closed_form_sigma0.
double projected_cdf(const GaussianPair& model, double theta, double t);

struct ThetaOracleResult {
    double theta0 = 0.0;               // power-maximizing direction
    std::vector<double> grid;          // evaluated directions
    std::vector<double> power;         // F1(t*(theta), theta) along the grid
};

// Population optimum of the direction choice: on a dense theta grid, solve
// F0(t, theta) / F(t, theta) = alpha_prime for t (F = pi0 F0 + pi1 F1) and
// return the direction maximizing F1(t*(theta), theta). Throws
// EstimationError if some direction has no root in (0, 1).
ThetaOracleResult theta0_oracle_normal(const GaussianPair& null_model,
                                       const GaussianPair& nonnull_model,
                                       double pi0, double alpha_prime,
                                       std::size_t n_theta = 1001);

struct RectangleFdrEstimate {
    double fdr = 0.0;          // NaN when nothing lands in the rectangle
    double mc_se = 0.0;
    std::size_t hits_null = 0;
    std::size_t hits_nonnull = 0;
};

// Monte-Carlo estimate of the rectangle-rule Bayesian Fdr
// pi0 F0(t) / (pi0 F0(t) + pi1 F1(t)) for the region [0,t1] x [0,t2]:
// sample n points from the mixture and report the null fraction among hits.
RectangleFdrEstimate fdr_rectangle_mc(const GaussianPair& null_model,
                                      const GaussianPair& nonnull_model,
                                      double pi0, double t1, double t2,
                                      std::size_t n, RngStream& rng);

// First-order power-ratio expansion around theta = pi/2: returns
// 1 + Delta(theta) where Delta compares the power at direction theta with
// the single-column procedure at the same nominal level alpha. Exactly 1 at
// theta = pi/2. Throws EstimationError on the removable singularity
// f1 - beta' f0 = 0 and when no threshold solves the level equation.
double delta_power_ratio(const GaussianPair& null_model,
                         const GaussianPair& nonnull_model,
                         double pi0, double alpha, double theta);

} // namespace simfdr
