#pragma once

#include <vector>

#include "simfdr/projection.hpp"

namespace simfdr {

// Scale estimate of the projected null scores. Builds the symmetrized set
// Z* = {-z : z >= c} u {z : -c < z <= c} u {z : z > c} from the input
// z-values and returns the root mean square of Z* (centered at zero,
// divisor |Z*|). Throws EstimationError when Z* is empty or all zero.
double estimate_sigma0(const std::vector<double>& z_values, double trim_c = 0.0);

// Population sigma0(theta) for normal scores with marginal standard
// deviations (s1, s2) and correlation rho0:
// sqrt(cos^2 s1^2 + sin^2 s2^2 + 2 rho0 s1 s2 cos sin).
double closed_form_sigma0(double theta, double s1, double s2, double rho0);

// Null CDF estimate F0(t) for a projected sample. Four kinds:
//  - parametric:    Phi(Phi^{-1}(t) / sigma0) with sigma0 estimated from the
//                   sample's normal scores (or supplied directly);
//  - nonparametric: symmetrized upper-tail empirical CDF
//                   F0(t) = #{p_i >= 1-t} / D            for t <= 1/2,
//                   F0(t) = 1 - #{p_i >= t} / D          for t >  1/2,
//                   D = 2 #{p_i > 1/2} + #{p_i = 1/2};
//  - identity:      F0(t) = t (the uniform null used by Storey-style
//                   baselines and for exact-equivalence tests);
//  - mean3_uniform: closed-form CDF of the mean of three independent
//                   uniforms (piecewise cubic), the null of a three-point
//                   moving average of uniform p-values.
// All kinds are nondecreasing with F0(0) = 0 and F0(1) = 1.
class NullCdf {
public:
    enum class Kind { parametric, nonparametric, identity, mean3_uniform };

    static NullCdf parametric(double sigma0);
    static NullCdf parametric_from_sample(const ProjectedSample& sample, double trim_c = 0.0);
    static NullCdf parametric_from_scores(const std::vector<double>& z_values, double trim_c = 0.0);
    static NullCdf nonparametric_from_sample(const ProjectedSample& sample);
    static NullCdf identity();
    static NullCdf mean_of_three_uniforms();

    // F0(t) for t in [0, 1] (throws std::domain_error outside).
    double operator()(double t) const;

    Kind kind() const { return kind_; }

    // Estimated or supplied scale; parametric kind only.
    double sigma0() const;

private:
    NullCdf() = default;
    Kind kind_ = Kind::identity;
    double sigma0_ = 1.0;
    std::vector<double> sorted_;  // ascending projected values
    double denom_ = 0.0;          // D above
};

// Joint density of a null bivariate p-value pair relative to independent
// uniform margins, evaluated from the closed forms for the two supported
// score families (normal with correlation rho0; bivariate t with df degrees
// of freedom and shape correlation rho0). Used by diagnostics and tests.
enum class NullFamily { normal, student_t };
double null_density_oracle(double p1, double p2, double rho0, NullFamily family, int df = 3);

} // namespace simfdr
