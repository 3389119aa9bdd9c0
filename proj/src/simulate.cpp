#include "zacr/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "zacr/errors.hpp"
#include "zacr/rng.hpp"

namespace zacr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

double censor_draw(const CensoringSpec& cens, double u) {
    switch (cens.kind) {
        case CensoringKind::None: return kInf;
        case CensoringKind::Uniform: return cens.parameter * u;
        case CensoringKind::Exponential: return -std::log1p(-u) / cens.parameter;
    }
    return kInf;
}

}  // namespace

CensoringSpec CensoringSpec::uniform(double c_max) {
    if (!(c_max > 0.0) || !std::isfinite(c_max)) {
        throw std::invalid_argument("uniform censoring: upper bound must be positive");
    }
    return {CensoringKind::Uniform, c_max};
}

CensoringSpec CensoringSpec::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("exponential censoring: rate must be positive");
    }
    return {CensoringKind::Exponential, rate};
}

const char* CensoringSpec::name() const {
    switch (kind) {
        case CensoringKind::None: return "none";
        case CensoringKind::Uniform: return "uniform";
        case CensoringKind::Exponential: return "exponential";
    }
    return "?";
}

Observation sample_observation(const ZacrModel& m, const CensoringSpec& cens, Rng& rng) {
    const double u_class = rng.uniform();
    const double u_time = rng.uniform();
    const double u_cens = rng.uniform();

    const double zero = m.zero_fraction();
    const double cure = m.cure_fraction();
    if (u_class < zero) {
        return {0.0, true};
    }
    if (u_class < zero + cure) {
        double c = censor_draw(cens, u_cens);
        if (!std::isfinite(c)) {
            throw std::invalid_argument(
                "sample_observation: a cured subject needs a censoring law; "
                "cure_fraction > 0 with censoring 'none' cannot be observed");
        }
        return {c, false};
    }
    double t = m.proper_quantile(u_time);
    double c = censor_draw(cens, u_cens);
    if (t <= c) return {t, true};
    return {c, false};
}

SurvivalDataset sample_dataset(const ZacrModel& m, std::size_t n,
                               const CensoringSpec& cens, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_dataset: n must be positive");
    if (cens.kind == CensoringKind::None && m.cure_fraction() > 0.0) {
        throw std::invalid_argument(
            "sample_dataset: cure_fraction > 0 requires a censoring law");
    }
    Rng rng(seed);
    std::vector<Observation> obs;
    obs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        obs.push_back(sample_observation(m, cens, rng));
    }
    return SurvivalDataset(std::move(obs));
}

double expected_censoring_rate(const ZacrModel& m, const CensoringSpec& cens) {
    const double cure = m.cure_fraction();
    const double weight = m.event_weight();
    switch (cens.kind) {
        case CensoringKind::None:
            if (cure > 0.0) {
                throw std::invalid_argument(
                    "expected_censoring_rate: cure_fraction > 0 requires a censoring law");
            }
            return 0.0;
        case CensoringKind::Uniform: {
            double c = cens.parameter;
            double integral = integrate([&](double t) { return m.proper_survival(t); },
                                        0.0, c, 1e-11 * std::max(c, 1.0));
            return cure + weight * integral / c;
        }
        case CensoringKind::Exponential: {
            double lam = cens.parameter;
            double upper = 40.0 / lam;  // exp(-40) tail is far below tolerance
            double integral =
                integrate([&](double t) { return lam * std::exp(-lam * t) * m.proper_survival(t); },
                          0.0, upper, 1e-11);
            return cure + weight * integral;
        }
    }
    return 0.0;
}

CensoringSpec calibrate_censoring(const ZacrModel& m, CensoringKind kind, double target_rate) {
    if (kind == CensoringKind::None) {
        throw std::invalid_argument("calibrate_censoring: nothing to calibrate for 'none'");
    }
    const double lo_rate = m.cure_fraction();
    const double hi_rate = 1.0 - m.zero_fraction();
    if (!(target_rate > lo_rate) || !(target_rate < hi_rate)) {
        throw NumericalError(
            "calibrate_censoring: target rate is outside the reachable interval (" +
            std::to_string(lo_rate) + ", " + std::to_string(hi_rate) + ")");
    }

    auto rate_at = [&](double par) {
        return expected_censoring_rate(
            m, kind == CensoringKind::Uniform ? CensoringSpec::uniform(par)
                                              : CensoringSpec::exponential(par));
    };
    // uniform: rate decreases in c_max; exponential: rate increases in rate.
    const double sign = kind == CensoringKind::Uniform ? -1.0 : 1.0;

    double lo = 1e-8, hi = 1.0;
    while (sign * (rate_at(hi) - target_rate) < 0.0) {
        hi *= 4.0;
        if (hi > 1e12) throw NumericalError("calibrate_censoring: bracketing failed (upper)");
    }
    while (sign * (rate_at(lo) - target_rate) > 0.0) {
        lo *= 0.25;
        if (lo < 1e-300) throw NumericalError("calibrate_censoring: bracketing failed (lower)");
    }
    // g(par) = sign * (rate(par) - target) is increasing in par for both kinds;
    // keep g(lo) < 0 < g(hi)
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sign * (rate_at(mid) - target_rate) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double par = 0.5 * (lo + hi);
    return kind == CensoringKind::Uniform ? CensoringSpec::uniform(par)
                                          : CensoringSpec::exponential(par);
}

namespace {

struct RepOutcome {
    bool converged = false;
    bool info_pd = false;
    std::vector<double> estimates;
    std::vector<double> std_errors;
    double grad_max_norm = 0.0;
    double censored_fraction = 0.0;
};

}  // namespace

MonteCarloReport monte_carlo_study(const ZacrModel& truth, std::size_t n, int B,
                                   const CensoringSpec& cens, std::uint64_t seed,
                                   const MonteCarloConfig& cfg, const FitFunction& fitter) {
    if (B < 1) throw std::invalid_argument("monte_carlo_study: B must be >= 1");
    if (!(cfg.ci_level > 0.0) || !(cfg.ci_level < 1.0)) {
        throw std::invalid_argument("monte_carlo_study: ci_level must lie in (0, 1)");
    }

    const ZacrVariant v = truth.variant();
    const std::vector<double> truth_par = parameters_of(truth);
    const std::size_t k = truth_par.size();
    const double z = normal_quantile(0.5 * (1.0 + cfg.ci_level));

    std::vector<RepOutcome> slots(static_cast<std::size_t>(B));
    unsigned hw = std::thread::hardware_concurrency();
    int n_threads = cfg.n_threads > 0 ? cfg.n_threads : static_cast<int>(hw ? hw : 1);
    n_threads = std::min<int>(n_threads, B);

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](int tid) {
        try {
            for (int r = tid; r < B; r += n_threads) {
                std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
                SurvivalDataset data = sample_dataset(truth, n, cens, derive_seed(rep_seed, 0));
                FitConfig fit_cfg = cfg.fit;
                fit_cfg.seed = derive_seed(rep_seed, 1);
                RepOutcome& out = slots[static_cast<std::size_t>(r)];
                out.censored_fraction = data.censored_fraction();
                FitResult fit = fitter(v, data, fit_cfg);
                out.converged = fit.converged;
                out.info_pd = fit.information_pd;
                out.estimates = fit.estimates;
                out.std_errors = fit.std_errors;
                out.grad_max_norm = fit.grad_max_norm;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    MonteCarloReport report;
    report.variant = v;
    report.truth = truth_par;
    report.n_replications = B;
    report.sample_size = n;
    report.seed = seed;

    double cens_sum = 0.0;
    for (const RepOutcome& o : slots) cens_sum += o.censored_fraction;
    report.mean_censoring_rate = cens_sum / static_cast<double>(B);

    std::vector<std::string> names = parameter_names(v);
    std::vector<double> sum_err(k, 0.0), sum_sq(k, 0.0);
    std::vector<double> n_cov(k, 0.0), n_ci(k, 0.0);
    int n_conv = 0;
    double max_grad = 0.0;
    int n_not_pd = 0;
    for (const RepOutcome& o : slots) {
        if (!o.converged) continue;
        ++n_conv;
        if (!o.info_pd) ++n_not_pd;
        if (std::isfinite(o.grad_max_norm)) max_grad = std::max(max_grad, o.grad_max_norm);
        for (std::size_t j = 0; j < k; ++j) {
            double err = o.estimates[j] - truth_par[j];
            sum_err[j] += err;
            sum_sq[j] += err * err;
            double se = o.std_errors[j];
            if (std::isfinite(se)) {
                n_ci[j] += 1.0;
                if (std::abs(err) <= z * se) n_cov[j] += 1.0;
            }
        }
    }
    report.n_converged = n_conv;
    report.convergence_warning = n_conv < static_cast<int>(0.8 * B);
    report.max_grad_norm = max_grad;
    report.n_information_not_pd = n_not_pd;
    report.rows.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        report.rows[j].parameter = names[j];
        if (n_conv > 0) {
            report.rows[j].bias = sum_err[j] / n_conv;
            report.rows[j].rmse = std::sqrt(sum_sq[j] / n_conv);
        }
        report.rows[j].cp = n_ci[j] > 0.0 ? n_cov[j] / n_ci[j]
                                          : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

MonteCarloReport monte_carlo_study(const ZacrModel& truth, std::size_t n, int B,
                                   const CensoringSpec& cens, std::uint64_t seed,
                                   const MonteCarloConfig& cfg) {
    return monte_carlo_study(truth, n, B, cens, seed, cfg,
                             [](ZacrVariant v, const SurvivalDataset& d, const FitConfig& fc) {
                                 return fit_mle(v, d, fc);
                             });
}

}  // namespace zacr
