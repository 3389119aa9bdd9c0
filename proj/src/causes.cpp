#include "zacr/causes.hpp"

#include <cmath>
#include <stdexcept>

namespace zacr {

namespace {

constexpr double kPoissonEta = 1e-8;  // |eta| below this: use the Poisson limit

void check_s(double s) {
    if (!(s >= 0.0) || !(s <= 1.0)) {
        throw std::domain_error("CauseCount: pgf argument must lie in [0, 1]");
    }
}

}  // namespace

CauseCount::CauseCount(double theta, double eta) : theta_(theta), eta_(eta) {
    if (!std::isfinite(theta) || !std::isfinite(eta)) {
        throw std::invalid_argument("CauseCount: parameters must be finite");
    }
    if (!(theta > 0.0)) {
        throw std::invalid_argument("CauseCount: theta must be positive");
    }
    if (eta < -1.0) {
        throw std::invalid_argument("CauseCount: eta must be >= -1");
    }
    if (!(eta * theta + 1.0 > 0.0)) {
        throw std::invalid_argument("CauseCount: eta * theta + 1 must be positive");
    }
}

double CauseCount::pmf(int n) const {
    if (n < 0) return 0.0;
    if (std::abs(eta_) < kPoissonEta) {
        return std::exp(n * std::log(theta_) - theta_ - std::lgamma(n + 1.0));
    }
    if (eta_ > 0.0) {
        double inv = 1.0 / eta_;
        double log_r = std::log(eta_ * theta_) - std::log1p(eta_ * theta_);
        return std::exp(std::lgamma(inv + n) - std::lgamma(inv) - std::lgamma(n + 1.0) +
                        n * log_r - inv * std::log1p(eta_ * theta_));
    }
    // eta in [-1, 0): finite support; walk the ratio recurrence
    double p = std::exp(-std::log1p(eta_ * theta_) / eta_);
    double inv = 1.0 / eta_;
    double r = eta_ * theta_ / (1.0 + eta_ * theta_);
    for (int k = 0; k < n; ++k) {
        p *= (inv + k) * r / (k + 1.0);
        if (p <= 0.0) return 0.0;
    }
    return p;
}

std::vector<double> CauseCount::pmf_table(int n_max) const {
    if (n_max < 0) {
        throw std::domain_error("CauseCount: n_max must be nonnegative");
    }
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    if (std::abs(eta_) < kPoissonEta) {
        out[0] = std::exp(-theta_);
        for (int n = 1; n <= n_max; ++n) out[n] = out[n - 1] * theta_ / n;
        return out;
    }
    double inv = 1.0 / eta_;
    double r = eta_ * theta_ / (1.0 + eta_ * theta_);
    out[0] = std::exp(-std::log1p(eta_ * theta_) / eta_);
    for (int n = 1; n <= n_max; ++n) {
        double p = out[n - 1] * (inv + (n - 1)) * r / n;
        out[n] = p > 0.0 ? p : 0.0;
    }
    return out;
}

double CauseCount::pgf(double s) const {
    check_s(s);
    if (std::abs(eta_) < kPoissonEta) {
        return std::exp(-theta_ * (1.0 - s));
    }
    return std::exp(-std::log1p(eta_ * theta_ * (1.0 - s)) / eta_);
}

double CauseCount::pgf_series(double s, int n_max) const {
    check_s(s);
    if (n_max < 0) {
        throw std::domain_error("CauseCount: n_max must be nonnegative");
    }
    std::vector<double> p = pmf_table(n_max);
    double acc = p[0];
    double power = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        power *= s;
        acc += p[n] * power;
    }
    return acc;
}

int CauseCount::truncation_index(double tail_tol) const {
    if (!(tail_tol > 0.0)) {
        throw std::domain_error("CauseCount: tail_tol must be positive");
    }
    constexpr int kCap = 10000;
    if (std::abs(eta_) < kPoissonEta) {
        double p = std::exp(-theta_);
        double cum = p;
        for (int n = 0; n < kCap; ++n) {
            if (cum >= 1.0 - tail_tol) return n;
            p *= theta_ / (n + 1.0);
            cum += p;
        }
        return kCap;
    }
    double inv = 1.0 / eta_;
    double r = eta_ * theta_ / (1.0 + eta_ * theta_);
    double p = std::exp(-std::log1p(eta_ * theta_) / eta_);
    double cum = p;
    for (int n = 0; n < kCap; ++n) {
        if (cum >= 1.0 - tail_tol) return n;
        p *= (inv + n) * r / (n + 1.0);
        if (p < 0.0) p = 0.0;
        cum += p;
    }
    return kCap;
}

}  // namespace zacr
