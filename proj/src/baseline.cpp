#include "zacr/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "zacr/rng.hpp"

namespace zacr {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

void check_params(const LogNormalParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.mu)) {
        throw std::invalid_argument("log-normal: sigma must be positive and parameters finite");
    }
}

// Acklam's rational approximation to the normal quantile (~1.15e-9 relative
// error before polishing).
double acklam(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("normal_quantile: p must lie strictly in (0, 1)");
    }
    double x = acklam(p);
    // One Halley step against the erfc-based CDF.
    double e = normal_cdf(x) - p;
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double log_normal_cdf(double y, const LogNormalParams& p) {
    check_params(p);
    if (y < 0.0 || std::isnan(y)) {
        throw std::domain_error("log_normal_cdf: y must be nonnegative");
    }
    if (y == 0.0) return 0.0;
    return normal_cdf((std::log(y) - p.mu) / p.sigma);
}

double log_normal_pdf(double y, const LogNormalParams& p) {
    check_params(p);
    if (!(y > 0.0)) {
        throw std::domain_error("log_normal_pdf: y must be positive");
    }
    return std::exp(log_normal_log_pdf(y, p));
}

double log_normal_log_pdf(double y, const LogNormalParams& p) {
    check_params(p);
    if (!(y > 0.0)) {
        throw std::domain_error("log_normal_log_pdf: y must be positive");
    }
    double ly = std::log(y);
    double z = (ly - p.mu) / p.sigma;
    return -0.5 * z * z - ly - std::log(p.sigma) - kLogSqrt2Pi;
}

double log_normal_quantile(double u, const LogNormalParams& p) {
    check_params(p);
    return std::exp(p.mu + p.sigma * normal_quantile(u));
}

LogNormal::LogNormal(double mu, double sigma) : p_{mu, sigma} {
    check_params(p_);
}

double BaselineDistribution::sample(Rng& rng) const {
    return quantile(rng.uniform());
}

}  // namespace zacr
