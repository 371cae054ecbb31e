#include "simfdr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "simfdr/estimation.hpp"
#include "simfdr/numeric.hpp"

namespace simfdr {

namespace {

void check_pvalues(const std::vector<double>& pvalues, const char* caller) {
    if (pvalues.empty())
        throw std::domain_error(std::string(caller) + ": p-values must not be empty");
    for (double v : pvalues)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::domain_error(std::string(caller) + ": p-values must lie in [0, 1]");
}

void check_alpha(double alpha, const char* caller) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error(std::string(caller) + ": alpha must be in (0, 1)");
}

// Step-up scan without the [0, 1] input check so it can run on weighted
// values that may exceed 1. Ties never straddle the step-up cutoff: if a
// value equal to the k-th order statistic appeared at rank k+1 it would
// qualify there too, contradicting maximality of k.
std::vector<std::size_t> bh_step_up(const std::vector<double>& values, double alpha) {
    const std::size_t m = values.size();
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::size_t kmax = 0;
    for (std::size_t k = 1; k <= m; ++k)
        if (sorted[k - 1] <= alpha * static_cast<double>(k) / static_cast<double>(m))
            kmax = k;
    std::vector<std::size_t> rejected;
    if (kmax == 0)
        return rejected;
    const double cutoff = sorted[kmax - 1];
    rejected.reserve(kmax);
    for (std::size_t i = 0; i < m; ++i)
        if (values[i] <= cutoff)
            rejected.push_back(i);
    return rejected;
}

} // namespace

StoreyResult storey(const std::vector<double>& pvalues, double alpha,
                    const std::vector<double>& lambda_grid) {
    return storey(pvalues, alpha, lambda_grid, NullCdf::identity());
}

StoreyResult storey(const std::vector<double>& pvalues, double alpha,
                    const std::vector<double>& lambda_grid, const NullCdf& null_cdf) {
    check_pvalues(pvalues, "storey");
    check_alpha(alpha, "storey");

    ProjectedSample sample;
    sample.theta = 0.0;
    sample.values = pvalues;

    const Pi0Estimate pi0 = pi0_hat(sample, null_cdf, lambda_grid);
    StoreyResult out;
    out.pi0 = pi0.pi0;
    out.lambda = pi0.lambda;
    out.threshold = threshold_alpha(sample, null_cdf, pi0.pi0, alpha);
    for (std::size_t i = 0; i < pvalues.size(); ++i)
        if (pvalues[i] <= out.threshold)
            out.rejected.push_back(i);
    return out;
}

std::vector<std::size_t> bh(const std::vector<double>& pvalues, double alpha) {
    check_pvalues(pvalues, "bh");
    check_alpha(alpha, "bh");
    return bh_step_up(pvalues, alpha);
}

WeightedBhResult weighted_bh(const PValueTable& table, double alpha, double shift_b) {
    check_alpha(alpha, "weighted_bh");
    if (!std::isfinite(shift_b))
        throw std::domain_error("weighted_bh: shift must be finite");

    const std::size_t m = table.size();
    const auto& z1 = table.z1();
    std::vector<double> prior(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        prior[i] = std_normal_cdf(-z1[i] - shift_b);
        total += prior[i];
    }

    WeightedBhResult out;
    out.weights.resize(m);
    std::vector<double> adjusted(m);
    const auto [mn, mx] = std::minmax_element(prior.begin(), prior.end());
    if (*mn == *mx) {
        // Uniform priors normalize to weight one exactly, keeping the result
        // identical to plain BH instead of drifting by summation round-off.
        std::fill(out.weights.begin(), out.weights.end(), 1.0);
        adjusted = table.p2();
    } else {
        const double mean = total / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
            out.weights[i] = prior[i] / mean;
            adjusted[i] = table.p2()[i] / out.weights[i];
        }
    }
    out.rejected = bh_step_up(adjusted, alpha);
    return out;
}

std::vector<std::size_t> two_stage(const PValueTable& table, double alpha,
                                   double filter_fraction) {
    check_alpha(alpha, "two_stage");
    if (!(filter_fraction >= 0.0 && filter_fraction < 1.0))
        throw std::domain_error("two_stage: filter fraction must be in [0, 1)");

    const std::size_t m = table.size();
    const std::size_t keep = std::min<std::size_t>(
        m, static_cast<std::size_t>(
               std::ceil((1.0 - filter_fraction) * static_cast<double>(m))));

    const auto& p1 = table.p1();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&p1](std::size_t a, std::size_t b) {
        if (p1[a] != p1[b])
            return p1[a] < p1[b];
        return a < b;
    });
    order.resize(keep);

    std::vector<double> survivors(keep);
    for (std::size_t j = 0; j < keep; ++j)
        survivors[j] = table.p2()[order[j]];

    std::vector<std::size_t> out;
    for (std::size_t local : bh_step_up(survivors, alpha))
        out.push_back(order[local]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> mean_filter_pstar(const std::vector<double>& p2) {
    check_pvalues(p2, "mean_filter_pstar");
    const std::size_t m = p2.size();
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = p2[i == 0 ? 0 : i - 1];
        const double hi = p2[i + 1 < m ? i + 1 : m - 1];
        out[i] = (lo + p2[i] + hi) / 3.0;
    }
    return out;
}

} // namespace simfdr
