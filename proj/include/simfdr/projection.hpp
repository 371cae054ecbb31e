#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace simfdr {

// Ingestion clamp for p-values: keeps normal scores finite.
inline constexpr double kPClampLow = 1e-12;
inline constexpr double kPClampHigh = 1.0 - 1e-12;

// Validate p in [0, 1] (throws std::domain_error otherwise, NaN included)
// and clamp it into [kPClampLow, kPClampHigh].
double clamp_probability(double p);

// Column table of bivariate p-values. Values are clamped on construction and
// the normal scores z = Phi^{-1}(p) are cached once per row so projections
// over many directions reuse them.
class PValueTable {
public:
    PValueTable(std::vector<double> p1, std::vector<double> p2);

    std::size_t size() const { return p1_.size(); }

    const std::vector<double>& p1() const { return p1_; }
    const std::vector<double>& p2() const { return p2_; }
    const std::vector<double>& z1() const { return z1_; }
    const std::vector<double>& z2() const { return z2_; }

    // Row labels; empty when rows are identified by their index.
    const std::vector<std::string>& ids() const { return ids_; }
    void set_ids(std::vector<std::string> ids);

    // Ground-truth labels (1 = nonnull); empty for real data.
    const std::vector<std::uint8_t>& truth() const { return truth_; }
    void set_truth(std::vector<std::uint8_t> truth);

private:
    std::vector<double> p1_, p2_;
    std::vector<double> z1_, z2_;
    std::vector<std::string> ids_;
    std::vector<std::uint8_t> truth_;
};

// Evenly spaced grid of n_points >= 2 directions covering [0, pi/2]
// inclusive of both endpoints.
std::vector<double> theta_grid(std::size_t n_points);

// The p-values of one projected sample: values[i] = p_i(theta).
struct ProjectedSample {
    double theta = 0.0;
    std::vector<double> values;
};

// Single-pair projection p(theta) = Phi(cos(theta) Phi^{-1}(p1) +
// sin(theta) Phi^{-1}(p2)), theta in [0, pi/2]. The endpoints return the
// corresponding input exactly (theta = 0 -> p1, theta = pi/2 -> p2).
double project(double p1, double p2, double theta);

// Project every row of the table using the cached normal scores. Endpoint
// directions return the clamped input column exactly.
ProjectedSample project_all(const PValueTable& table, double theta);

// Combined normal scores z_i(theta) = cos(theta) z1_i + sin(theta) z2_i for
// the same sample; values[i] = Phi(z_i(theta)). Shared by the estimators
// that work on the normal-score scale.
std::vector<double> projected_scores(const PValueTable& table, double theta);

} // namespace simfdr
