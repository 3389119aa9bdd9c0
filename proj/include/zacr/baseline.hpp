#pragma once

namespace zacr {

class Rng;

// Standard normal CDF, accurate to ~1e-15 via erfc.
double normal_cdf(double z);

// Inverse standard normal CDF for p in (0, 1); rational initial guess
// polished with one Halley step, |Phi(result) - p| <~ 1e-15.
double normal_quantile(double p);

struct LogNormalParams {
    double mu = 0.0;
    double sigma = 1.0;
};

double log_normal_cdf(double y, const LogNormalParams& p);
double log_normal_pdf(double y, const LogNormalParams& p);
double log_normal_log_pdf(double y, const LogNormalParams& p);
double log_normal_quantile(double u, const LogNormalParams& p);

// Lifetime law of a single latent cause. Everything downstream touches the
// baseline only through this surface, so swapping in another positive
// continuous law means implementing these five members.
class BaselineDistribution {
public:
    virtual ~BaselineDistribution() = default;
    virtual double cdf(double y) const = 0;
    virtual double pdf(double y) const = 0;
    virtual double log_pdf(double y) const = 0;
    virtual double quantile(double u) const = 0;
    double survival(double y) const { return 1.0 - cdf(y); }
    double sample(Rng& rng) const;
};

class LogNormal final : public BaselineDistribution {
public:
    LogNormal(double mu, double sigma);
    explicit LogNormal(const LogNormalParams& p) : LogNormal(p.mu, p.sigma) {}

    double mu() const { return p_.mu; }
    double sigma() const { return p_.sigma; }
    const LogNormalParams& params() const { return p_; }

    double cdf(double y) const override { return log_normal_cdf(y, p_); }
    double pdf(double y) const override { return log_normal_pdf(y, p_); }
    double log_pdf(double y) const override { return log_normal_log_pdf(y, p_); }
    double quantile(double u) const override { return log_normal_quantile(u, p_); }

private:
    LogNormalParams p_;
};

}  // namespace zacr
