#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zacr/dataset.hpp"
#include "zacr/inference.hpp"
#include "zacr/model.hpp"

namespace zacr {

class Rng;

enum class CensoringKind { None, Uniform, Exponential };

struct CensoringSpec {
    CensoringKind kind = CensoringKind::None;
    double parameter = 0.0;  // upper bound (uniform) or rate (exponential)

    static CensoringSpec none() { return {CensoringKind::None, 0.0}; }
    static CensoringSpec uniform(double c_max);
    static CensoringSpec exponential(double rate);
    const char* name() const;
};

// One subject: class draw (zero atom / cured / susceptible), inverse-CDF event
// time, censoring draw. All three uniforms are always consumed so streams stay
// aligned regardless of the path taken.
Observation sample_observation(const ZacrModel& m, const CensoringSpec& cens, Rng& rng);

SurvivalDataset sample_dataset(const ZacrModel& m, std::size_t n,
                               const CensoringSpec& cens, std::uint64_t seed);

// P(observation is censored) under the model and censoring law.
double expected_censoring_rate(const ZacrModel& m, const CensoringSpec& cens);

// Censoring parameter such that the expected censoring rate hits target_rate.
// The reachable range is (cure_fraction, 1 - zero_fraction); anything else
// throws NumericalError.
CensoringSpec calibrate_censoring(const ZacrModel& m, CensoringKind kind, double target_rate);

struct MonteCarloRow {
    std::string parameter;
    double bias = 0.0;
    double rmse = 0.0;
    double cp = 0.0;  // Wald coverage probability
};

struct MonteCarloReport {
    ZacrVariant variant;
    std::vector<double> truth;  // reporting order
    std::vector<MonteCarloRow> rows;
    int n_replications = 0;
    std::size_t sample_size = 0;
    std::uint64_t seed = 0;
    double mean_censoring_rate = 0.0;
    int n_converged = 0;
    bool convergence_warning = false;  // more than 20% of replications excluded
    // diagnostics over the converged fits
    double max_grad_norm = 0.0;
    int n_information_not_pd = 0;
};

struct MonteCarloConfig {
    double ci_level = 0.95;
    int n_threads = 0;  // <= 0 means hardware concurrency
    FitConfig fit;
};

using FitFunction =
    std::function<FitResult(ZacrVariant, const SurvivalDataset&, const FitConfig&)>;

// Repeated simulate-and-refit study: bias, RMSE and Wald coverage per
// parameter against the generating truth. Replication r draws its data and
// fit seeds from counter-derived substreams of `seed`, so results do not
// depend on thread count or completion order.
MonteCarloReport monte_carlo_study(const ZacrModel& truth, std::size_t n, int B,
                                   const CensoringSpec& cens, std::uint64_t seed,
                                   const MonteCarloConfig& cfg = {});

// Same, with a custom fitter (test seam).
MonteCarloReport monte_carlo_study(const ZacrModel& truth, std::size_t n, int B,
                                   const CensoringSpec& cens, std::uint64_t seed,
                                   const MonteCarloConfig& cfg, const FitFunction& fitter);

}  // namespace zacr
