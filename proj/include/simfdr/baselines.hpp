#pragma once

#include <cstddef>
#include <vector>

#include "simfdr/null_model.hpp"
#include "simfdr/projection.hpp"

namespace simfdr {

struct StoreyResult {
    std::vector<std::size_t> rejected;  // ascending indices
    double pi0 = 1.0;
    double lambda = 0.0;
    double threshold = 0.0;
};

// Storey's procedure on a single p-value column: pi0 by the same
// data-driven-lambda rule as the main pipeline with the identity null CDF,
// then the largest observed t with m * pi0 * t / max(R(t), 1) <= alpha.
StoreyResult storey(const std::vector<double>& pvalues, double alpha,
                    const std::vector<double>& lambda_grid);

// Same procedure against an explicit null CDF, for columns whose null is not
// uniform. The serial mean filter runs through here with the
// mean-of-three-uniforms null; the three-argument form is the identity case.
StoreyResult storey(const std::vector<double>& pvalues, double alpha,
                    const std::vector<double>& lambda_grid, const NullCdf& null_cdf);

// Benjamini-Hochberg step-up: reject the k smallest p-values for the largest
// k with p_(k) <= k alpha / m.
std::vector<std::size_t> bh(const std::vector<double>& pvalues, double alpha);

struct WeightedBhResult {
    std::vector<std::size_t> rejected;
    std::vector<double> weights;  // mean-one weights actually used
};

// Weighted BH: prior weight v_i = Phi(Phi^{-1}(1 - p_{i1}) - shift_b)
// normalized to mean one, then BH on p_{i2} / w_i.
WeightedBhResult weighted_bh(const PValueTable& table, double alpha, double shift_b = 2.0);

// Two-stage filtering: keep the ceil((1 - filter_fraction) m) rows with the
// smallest p1 (ties broken by row index), then BH on the survivors' p2 at
// level alpha. Indices refer to the original table.
std::vector<std::size_t> two_stage(const PValueTable& table, double alpha,
                                   double filter_fraction = 0.5);

// Serial mean filter p*_i = (p2_{i-1} + p2_i + p2_{i+1}) / 3 with the
// neighbor indices clamped to the ends.
std::vector<double> mean_filter_pstar(const std::vector<double>& p2);

} // namespace simfdr
