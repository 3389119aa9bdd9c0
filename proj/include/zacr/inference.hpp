#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zacr/dataset.hpp"
#include "zacr/model.hpp"

namespace zacr {

// Reporting order used everywhere estimates appear as a flat vector:
//   mixture    (mu, sigma, p0, p1)
//   promotion  (mu, sigma, tau, theta)
//   geo / nb   (mu, sigma, alpha1, alpha0)
std::vector<std::string> parameter_names(ZacrVariant v);
std::vector<double> parameters_of(const ZacrModel& m);
ZacrModel model_from_parameters(ZacrVariant v, const std::vector<double>& params);

// Censored log-likelihood; returns -inf when the sample is impossible under
// the model (never throws for that).
double log_likelihood(const ZacrModel& m, const SurvivalDataset& data);

struct FitConfig {
    int n_starts = 5;
    int max_iterations = 2000;
    double f_tol = 1e-9;
    double x_tol = 1e-6;
    std::uint64_t seed = 0;
    bool polish = true;                           // Newton refinement after the simplex
    std::optional<std::vector<double>> initial;   // natural scale, reporting order
};

struct FitResult {
    ZacrVariant variant;
    std::vector<std::string> parameter_names;
    std::vector<double> estimates;
    std::vector<double> std_errors;    // NaN when the information matrix is unusable
    std::vector<double> covariance;    // row-major k x k, NaN-filled when unusable
    double log_lik = 0.0;
    double aic = 0.0;
    bool converged = false;
    int n_restarts_used = 0;
    bool information_pd = false;
    double grad_max_norm = 0.0;        // max-norm of the score at the estimate

    std::size_t k() const { return estimates.size(); }
};

// Maximum likelihood in an unconstrained reparameterization (log scales;
// additive log-ratio for the mixture simplex), multi-start Nelder-Mead with
// deterministic seed-derived perturbations, then Wald machinery from the
// observed information.
FitResult fit_mle(ZacrVariant v, const SurvivalDataset& data, const FitConfig& cfg = {});

// Observed information: negative Hessian of the log-likelihood on the natural
// scale (reporting order), by central differences with steps
// max(1e-4 |x_j|, 1e-5). Throws NumericalError if the stencil leaves the
// feasible region or produces non-finite values.
std::vector<double> observed_information(const ZacrModel& m, const SurvivalDataset& data);

struct WaldInterval {
    double lower = 0.0;
    double upper = 0.0;
};
std::vector<WaldInterval> wald_intervals(const FitResult& fit, double level);

double aic_value(double log_lik, int n_params);

// Index of the preferred fit: lowest AIC, ties broken by fewer parameters.
std::size_t select_by_aic(const std::vector<FitResult>& fits);

// Dense SPD helpers (row-major k x k). cholesky_factor overwrites `a` with
// the lower factor and reports success; spd_inverse throws NumericalError
// when the matrix is not positive definite.
bool cholesky_factor(std::vector<double>& a, std::size_t k);
std::vector<double> spd_inverse(std::vector<double> a, std::size_t k);

}  // namespace zacr
