#include "simfdr/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "simfdr/numeric.hpp"

namespace simfdr {

namespace {

constexpr double kHalfPi = 1.5707963267948966192;

void check_theta(double theta) {
    if (std::isnan(theta) || theta < 0.0 || theta > kHalfPi)
        throw std::domain_error("theta must lie in [0, pi/2]");
}

} // namespace

double clamp_probability(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw std::domain_error("p-value outside [0, 1]");
    if (p < kPClampLow) return kPClampLow;
    if (p > kPClampHigh) return kPClampHigh;
    return p;
}

PValueTable::PValueTable(std::vector<double> p1, std::vector<double> p2)
    : p1_(std::move(p1)), p2_(std::move(p2)) {
    if (p1_.empty())
        throw std::domain_error("PValueTable: at least one row required");
    if (p1_.size() != p2_.size())
        throw std::domain_error("PValueTable: p1 and p2 must have equal length");
    z1_.resize(p1_.size());
    z2_.resize(p2_.size());
    for (std::size_t i = 0; i < p1_.size(); ++i) {
        try {
            p1_[i] = clamp_probability(p1_[i]);
            p2_[i] = clamp_probability(p2_[i]);
        } catch (const std::domain_error&) {
            throw std::domain_error("PValueTable: p-value outside [0, 1] at row " +
                                    std::to_string(i + 1));
        }
        z1_[i] = std_normal_quantile(p1_[i]);
        z2_[i] = std_normal_quantile(p2_[i]);
    }
}

void PValueTable::set_ids(std::vector<std::string> ids) {
    if (ids.size() != size())
        throw std::domain_error("PValueTable: ids length mismatch");
    ids_ = std::move(ids);
}

void PValueTable::set_truth(std::vector<std::uint8_t> truth) {
    if (truth.size() != size())
        throw std::domain_error("PValueTable: truth length mismatch");
    truth_ = std::move(truth);
}

std::vector<double> theta_grid(std::size_t n_points) {
    if (n_points < 2)
        throw std::domain_error("theta_grid: need at least 2 points");
    std::vector<double> grid(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        grid[i] = kHalfPi * static_cast<double>(i) / static_cast<double>(n_points - 1);
    grid.back() = kHalfPi;
    return grid;
}

namespace {

// Projections share the ingestion clamp: Phi(z) rounds to exactly 1.0 once
// z exceeds ~8.3, which would otherwise put an atom at 1 in the projected
// sample and break the symmetrized null estimate.
double clamp_projected(double p) {
    if (p < kPClampLow) return kPClampLow;
    if (p > kPClampHigh) return kPClampHigh;
    return p;
}

} // namespace

double project(double p1, double p2, double theta) {
    check_theta(theta);
    p1 = clamp_probability(p1);
    p2 = clamp_probability(p2);
    if (theta == 0.0) return p1;
    if (theta == kHalfPi) return p2;
    const double z = std::cos(theta) * std_normal_quantile(p1) +
                     std::sin(theta) * std_normal_quantile(p2);
    return clamp_projected(std_normal_cdf(z));
}

ProjectedSample project_all(const PValueTable& table, double theta) {
    check_theta(theta);
    ProjectedSample sample;
    sample.theta = theta;
    if (theta == 0.0) {
        sample.values = table.p1();
        return sample;
    }
    if (theta == kHalfPi) {
        sample.values = table.p2();
        return sample;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto& z1 = table.z1();
    const auto& z2 = table.z2();
    sample.values.resize(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        sample.values[i] = clamp_projected(std_normal_cdf(c * z1[i] + s * z2[i]));
    return sample;
}

std::vector<double> projected_scores(const PValueTable& table, double theta) {
    check_theta(theta);
    const auto& z1 = table.z1();
    const auto& z2 = table.z2();
    if (theta == 0.0) return z1;
    if (theta == kHalfPi) return z2;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> z(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        z[i] = c * z1[i] + s * z2[i];
    return z;
}

} // namespace simfdr
