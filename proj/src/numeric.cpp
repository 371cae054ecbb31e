#include "simfdr/numeric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace simfdr {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// Series expansion of P(a, x) for x < a + 1.
double lower_gamma_series(double a, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), x >= a + 1 (modified Lentz).
double upper_gamma_cont_frac(double a, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double std_normal_cdf(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_pdf(double x) {
    constexpr double kInvSqrt2Pi = 0.3989422804014326779;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_quantile(double p) {
    // Wichura's PPND16 rational approximations (double-precision grade).
    if (std::isnan(p) || p <= 0.0 || p >= 1.0)
        throw std::domain_error("std_normal_quantile: p must lie strictly inside (0, 1)");

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("regularized_incomplete_beta: a and b must be positive");
    if (std::isnan(x) || x < 0.0 || x > 1.0)
        throw std::domain_error("regularized_incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cont_frac(a, b, x) / a;
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0))
        throw std::domain_error("regularized_lower_gamma: a must be positive");
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("regularized_lower_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    return 1.0 - upper_gamma_cont_frac(a, x);
}

double student_t_cdf(double x, int v) {
    if (v < 1) throw std::domain_error("student_t_cdf: degrees of freedom must be >= 1");
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
    if (x == 0.0) return 0.5;

    const double df = static_cast<double>(v);
    const double w = df / (df + x * x);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, w);
    return x > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, int v) {
    if (v < 1) throw std::domain_error("student_t_quantile: degrees of freedom must be >= 1");
    if (std::isnan(p) || p <= 0.0 || p >= 1.0)
        throw std::domain_error("student_t_quantile: p must lie strictly inside (0, 1)");
    if (p == 0.5) return 0.0;

    // Bracket, then bisect; the CDF is strictly increasing.
    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, v) > p) lo *= 2.0;
    while (student_t_cdf(hi, v) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (student_t_cdf(mid, v) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double chi_square_cdf(double x, int k) {
    if (k < 1) throw std::domain_error("chi_square_cdf: degrees of freedom must be >= 1");
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return regularized_lower_gamma(0.5 * static_cast<double>(k), 0.5 * x);
}

} // namespace simfdr
