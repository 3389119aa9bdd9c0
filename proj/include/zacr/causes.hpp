#pragma once

#include <vector>

namespace zacr {

// Count distribution for the latent number of event causes: mean theta,
// variance theta * (1 + eta * theta). eta = -1 is Bernoulli, eta -> 0
// Poisson, eta = 1 geometric; eta in (-1, 0) gives truncated-support
// binomial-type laws, eta > 0 negative binomial.
class CauseCount {
public:
    CauseCount(double theta, double eta);

    double theta() const { return theta_; }
    double eta() const { return eta_; }

    double pmf(int n) const;

    // pmf(0..n_max) in one pass (the recurrence makes this O(n_max))
    std::vector<double> pmf_table(int n_max) const;

    // probability generating function E[s^N], closed form
    double pgf(double s) const;

    // truncated series sum_{n=0}^{n_max} pmf(n) s^n for s in [0, 1]
    double pgf_series(double s, int n_max) const;

    // smallest N with cumulative pmf >= 1 - tail_tol, capped at 10000
    int truncation_index(double tail_tol) const;

private:
    double theta_;
    double eta_;
};

}  // namespace zacr
