#include "zacr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "zacr/errors.hpp"
#include "zacr/nelder_mead.hpp"
#include "zacr/numdiff.hpp"
#include "zacr/rng.hpp"

namespace zacr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

struct Prepared {
    std::size_t n_zero = 0;
    std::vector<double> log_t;            // log of positive times
    std::vector<unsigned char> is_event;  // parallel to log_t
};

Prepared prepare(const SurvivalDataset& data) {
    Prepared p;
    p.log_t.reserve(data.size());
    p.is_event.reserve(data.size());
    for (const Observation& o : data.observations()) {
        if (o.time == 0.0) {
            ++p.n_zero;
        } else {
            p.log_t.push_back(std::log(o.time));
            p.is_event.push_back(o.event ? 1 : 0);
        }
    }
    return p;
}

double log_likelihood_prepared(const ZacrModel& m, const Prepared& p) {
    double ll = 0.0;
    if (p.n_zero > 0) {
        double z = m.zero_fraction();
        if (!(z > 0.0)) return -kInf;
        ll += static_cast<double>(p.n_zero) * std::log(z);
    }
    const double mu = m.baseline().mu();
    const double inv_sigma = 1.0 / m.baseline().sigma();
    const double log_sigma = std::log(m.baseline().sigma());
    for (std::size_t i = 0; i < p.log_t.size(); ++i) {
        const double z = (p.log_t[i] - mu) * inv_sigma;
        const double F = normal_cdf(z);
        double term;
        if (p.is_event[i]) {
            const double logf = -0.5 * z * z - p.log_t[i] - log_sigma - kLogSqrt2Pi;
            term = m.log_event_density_from_cdf(F, logf);
        } else {
            term = std::log(m.population_survival_from_cdf(F));
        }
        if (!std::isfinite(term)) return -kInf;
        ll += term;
    }
    return std::isfinite(ll) ? ll : -kInf;
}

// ---- natural <-> unconstrained reparameterization -------------------------

std::vector<double> to_unconstrained(ZacrVariant v, const std::vector<double>& nat) {
    std::vector<double> x(4);
    x[0] = nat[0];
    x[1] = std::log(nat[1]);
    if (v.kind == VariantKind::StandardMixture) {
        double p0 = std::max(nat[2], 1e-10);
        double p1 = std::max(nat[3], 1e-10);
        double pw = std::max(1.0 - p0 - p1, 1e-10);
        x[2] = std::log(p0 / pw);
        x[3] = std::log(p1 / pw);
    } else {
        x[2] = std::log(nat[2]);
        x[3] = std::log(nat[3]);
    }
    return x;
}

std::vector<double> to_natural(ZacrVariant v, const std::vector<double>& x) {
    std::vector<double> nat(4);
    nat[0] = x[0];
    nat[1] = std::exp(x[1]);
    if (v.kind == VariantKind::StandardMixture) {
        double mx = std::max({0.0, x[2], x[3]});
        double e0 = std::exp(x[2] - mx);
        double e1 = std::exp(x[3] - mx);
        double den = std::exp(-mx) + e0 + e1;
        nat[2] = e0 / den;
        nat[3] = e1 / den;
    } else {
        nat[2] = std::exp(x[2]);
        nat[3] = std::exp(x[3]);
    }
    return nat;
}

// natural reporting order -> (cure_par, zero_par) for ZacrModel::make
void split_params(ZacrVariant v, const std::vector<double>& nat,
                  double* cure_par, double* zero_par) {
    if (v.kind == VariantKind::StandardMixture) {
        *cure_par = nat[2];
        *zero_par = nat[3];
    } else {
        *cure_par = nat[3];
        *zero_par = nat[2];
    }
}

bool feasible_natural(ZacrVariant v, const std::vector<double>& nat) {
    double cure_par, zero_par;
    split_params(v, nat, &cure_par, &zero_par);
    return ZacrModel::feasible(v, {nat[0], nat[1]}, cure_par, zero_par);
}

ZacrModel model_from_natural(ZacrVariant v, const std::vector<double>& nat) {
    double cure_par, zero_par;
    split_params(v, nat, &cure_par, &zero_par);
    return ZacrModel::make(v, {nat[0], nat[1]}, cure_par, zero_par);
}

// ---- data-driven initial values -------------------------------------------

double empirical_quantile(const std::vector<double>& sorted, double q) {
    double idx = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double w = idx - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

std::vector<double> default_initial(ZacrVariant v, const SurvivalDataset& data) {
    const double n = static_cast<double>(data.size());
    std::vector<double> t_event;
    double cens_late = 0.0;
    for (const Observation& o : data.observations()) {
        if (o.time > 0.0 && o.event) t_event.push_back(o.time);
    }
    std::sort(t_event.begin(), t_event.end());
    const double q90 = empirical_quantile(t_event, 0.90);
    for (const Observation& o : data.observations()) {
        if (!o.event && o.time > q90) cens_late += 1.0;
    }

    double p1 = std::clamp(static_cast<double>(data.zero_count()) / n, 0.5 / n, 0.95);
    double p0 = std::clamp(cens_late / n, 0.5 / n, 0.9 * (1.0 - p1));

    const double lt25 = std::log(empirical_quantile(t_event, 0.25));
    const double lt50 = std::log(empirical_quantile(t_event, 0.50));
    const double lt75 = std::log(empirical_quantile(t_event, 0.75));

    std::vector<double> nat(4);
    if (v.kind == VariantKind::StandardMixture) {
        // log-moment initials are adequate here: the susceptible density is
        // the baseline itself
        double s1 = 0.0, s2 = 0.0;
        for (double t : t_event) {
            double lt = std::log(t);
            s1 += lt;
            s2 += lt * lt;
        }
        double mean = s1 / static_cast<double>(t_event.size());
        double var = s2 / static_cast<double>(t_event.size()) - mean * mean;
        nat[0] = mean;
        nat[1] = std::max(std::sqrt(std::max(var, 0.0)), 0.1);
        nat[2] = p0;
        nat[3] = p1;
        return nat;
    }

    // The susceptible density sits well to the left of the baseline for the
    // other variants, so match quartiles through the variant's proper CDF
    // instead of using raw log moments.
    double cure_par, zero_par;
    auto baseline_cdf_at = [&](double u) {
        switch (v.kind) {
            case VariantKind::Promotion:
                return -std::log1p(u * std::expm1(-cure_par)) / cure_par;
            default: {
                double eta = v.count_eta();
                double omc = -std::expm1(-std::log1p(eta * cure_par) / eta);
                return std::expm1(-eta * std::log(1.0 - u * omc)) / (eta * cure_par);
            }
        }
    };
    if (v.kind == VariantKind::Promotion) {
        cure_par = -std::log(p0);
        zero_par = -std::log(p1);
    } else {
        double eta = v.count_eta();
        if (std::abs(eta) < 1e-8) {
            cure_par = -std::log(p0);
            zero_par = -std::log(p1);
        } else {
            cure_par = std::expm1(-eta * std::log(p0)) / eta;
            zero_par = std::expm1(-eta * std::log(p1)) / eta;
        }
    }
    double z25 = normal_quantile(std::clamp(baseline_cdf_at(0.25), 1e-12, 1.0 - 1e-12));
    double z50 = normal_quantile(std::clamp(baseline_cdf_at(0.50), 1e-12, 1.0 - 1e-12));
    double z75 = normal_quantile(std::clamp(baseline_cdf_at(0.75), 1e-12, 1.0 - 1e-12));
    double sigma = (lt75 - lt25) / std::max(z75 - z25, 1e-6);
    sigma = std::clamp(sigma, 0.05, 50.0);
    nat[0] = lt50 - sigma * z50;
    nat[1] = sigma;
    nat[2] = zero_par;
    nat[3] = cure_par;
    return nat;
}

// ---- Newton polish in the unconstrained space ------------------------------

void polish_newton(const std::function<double(const std::vector<double>&)>& obj,
                   std::vector<double>& x, double& fx) {
    const std::size_t k = x.size();
    for (int iter = 0; iter < 8; ++iter) {
        std::vector<double> g = central_gradient(obj, x);
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (!std::isfinite(gmax) || gmax < 1e-5) break;

        std::vector<double> H = central_hessian(obj, x);
        bool bad = false;
        for (double v : H) {
            if (!std::isfinite(v)) { bad = true; break; }
        }
        if (bad) break;

        double max_diag = 0.0;
        for (std::size_t j = 0; j < k; ++j) max_diag = std::max(max_diag, std::abs(H[j * k + j]));
        double ridge = 0.0;
        std::vector<double> cov;
        for (int attempt = 0; attempt < 6; ++attempt) {
            std::vector<double> Hr = H;
            for (std::size_t j = 0; j < k; ++j) Hr[j * k + j] += ridge;
            if (cholesky_factor(Hr, k)) {
                // forward/back solve L L^T s = g
                std::vector<double> s(g);
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < i; ++j) s[i] -= Hr[i * k + j] * s[j];
                    s[i] /= Hr[i * k + i];
                }
                for (std::size_t i = k; i-- > 0;) {
                    for (std::size_t j = i + 1; j < k; ++j) s[i] -= Hr[j * k + i] * s[j];
                    s[i] /= Hr[i * k + i];
                }
                cov = std::move(s);
                break;
            }
            ridge = ridge == 0.0 ? std::max(1e-6 * max_diag, 1e-10) : ridge * 100.0;
        }
        if (cov.empty()) break;

        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 6; ++half) {
            std::vector<double> cand(x);
            for (std::size_t j = 0; j < k; ++j) cand[j] -= step * cov[j];
            double fc = obj(cand);
            if (std::isfinite(fc) && fc <= fx + 1e-10 * (1.0 + std::abs(fx))) {
                x = std::move(cand);
                fx = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
}

}  // namespace

std::vector<std::string> parameter_names(ZacrVariant v) {
    switch (v.kind) {
        case VariantKind::StandardMixture: return {"mu", "sigma", "p0", "p1"};
        case VariantKind::Promotion: return {"mu", "sigma", "tau", "theta"};
        default: return {"mu", "sigma", "alpha1", "alpha0"};
    }
}

std::vector<double> parameters_of(const ZacrModel& m) {
    if (m.variant().kind == VariantKind::StandardMixture) {
        return {m.baseline().mu(), m.baseline().sigma(), m.cure_parameter(), m.zero_parameter()};
    }
    return {m.baseline().mu(), m.baseline().sigma(), m.zero_parameter(), m.cure_parameter()};
}

ZacrModel model_from_parameters(ZacrVariant v, const std::vector<double>& params) {
    if (params.size() != 4) {
        throw std::invalid_argument("model_from_parameters: expected 4 parameters");
    }
    return model_from_natural(v, params);
}

double log_likelihood(const ZacrModel& m, const SurvivalDataset& data) {
    return log_likelihood_prepared(m, prepare(data));
}

double aic_value(double log_lik, int n_params) {
    return 2.0 * n_params - 2.0 * log_lik;
}

FitResult fit_mle(ZacrVariant v, const SurvivalDataset& data, const FitConfig& cfg) {
    std::size_t n_pos_events = data.event_count() - data.zero_count();
    if (n_pos_events < 2) {
        throw DataError(
            "fit_mle: at least two positive event times are required to identify "
            "the baseline parameters");
    }
    if (cfg.n_starts < 1) throw std::invalid_argument("fit_mle: n_starts must be >= 1");

    const Prepared prep = prepare(data);
    auto objective = [&](const std::vector<double>& x) {
        std::vector<double> nat = to_natural(v, x);
        if (!feasible_natural(v, nat)) return kInf;
        double ll = log_likelihood_prepared(model_from_natural(v, nat), prep);
        return std::isfinite(ll) ? -ll : kInf;
    };

    std::vector<double> nat0;
    if (cfg.initial) {
        if (cfg.initial->size() != 4) {
            throw std::invalid_argument("fit_mle: initial must hold 4 parameters");
        }
        if (!feasible_natural(v, *cfg.initial)) {
            throw std::invalid_argument("fit_mle: initial parameters are infeasible");
        }
        nat0 = *cfg.initial;
    } else {
        nat0 = default_initial(v, data);
    }
    const std::vector<double> x0 = to_unconstrained(v, nat0);

    NelderMeadOptions nm_opt;
    nm_opt.max_iterations = cfg.max_iterations;
    nm_opt.f_tol = cfg.f_tol;
    nm_opt.x_tol = cfg.x_tol;

    NelderMeadResult best;
    best.f = kInf;
    for (int s = 0; s < cfg.n_starts; ++s) {
        std::vector<double> xs = x0;
        if (s > 0) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
            for (double& coord : xs) coord += 0.35 * rng.normal();
        }
        NelderMeadResult r = nelder_mead_minimize(objective, xs, nm_opt);
        if (r.f < best.f) best = std::move(r);
    }
    if (!std::isfinite(best.f)) {
        throw NumericalError("fit_mle: no start produced a finite likelihood");
    }

    if (cfg.polish) {
        polish_newton(objective, best.x, best.f);
    }

    FitResult out;
    out.variant = v;
    out.parameter_names = parameter_names(v);
    out.estimates = to_natural(v, best.x);
    out.converged = best.converged;
    out.n_restarts_used = cfg.n_starts;

    ZacrModel fitted = model_from_natural(v, out.estimates);
    out.log_lik = log_likelihood(fitted, data);
    out.aic = aic_value(out.log_lik, static_cast<int>(out.estimates.size()));

    const std::size_t k = out.estimates.size();
    out.std_errors.assign(k, kNaN);
    out.covariance.assign(k * k, kNaN);
    out.information_pd = false;
    try {
        std::vector<double> info = observed_information(fitted, data);
        std::vector<double> cov = spd_inverse(info, k);
        bool ok = true;
        for (std::size_t j = 0; j < k; ++j) {
            if (!(cov[j * k + j] > 0.0)) ok = false;
        }
        if (ok) {
            out.covariance = cov;
            for (std::size_t j = 0; j < k; ++j) out.std_errors[j] = std::sqrt(cov[j * k + j]);
            out.information_pd = true;
        }
    } catch (const NumericalError&) {
        // leave the NaNs in place; callers can see information_pd == false
    }

    out.grad_max_norm = kNaN;
    try {
        auto neg_ll_nat = [&](const std::vector<double>& nat) {
            if (!feasible_natural(v, nat)) return kNaN;
            double ll = log_likelihood_prepared(model_from_natural(v, nat), prep);
            return -ll;
        };
        std::vector<double> g = central_gradient(neg_ll_nat, out.estimates);
        double gmax = 0.0;
        for (double val : g) gmax = std::max(gmax, std::abs(val));
        out.grad_max_norm = gmax;
    } catch (const std::exception&) {
    }
    return out;
}

std::vector<double> observed_information(const ZacrModel& m, const SurvivalDataset& data) {
    const ZacrVariant v = m.variant();
    const Prepared prep = prepare(data);
    auto neg_ll = [&](const std::vector<double>& nat) {
        if (!feasible_natural(v, nat)) return kNaN;
        double ll = log_likelihood_prepared(model_from_natural(v, nat), prep);
        return -ll;
    };
    std::vector<double> H = central_hessian(neg_ll, parameters_of(m));
    for (double val : H) {
        if (!std::isfinite(val)) {
            throw NumericalError(
                "observed_information: likelihood is not finite on the "
                "finite-difference stencil");
        }
    }
    return H;
}

std::vector<WaldInterval> wald_intervals(const FitResult& fit, double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::domain_error("wald_intervals: level must lie in (0, 1)");
    }
    double z = normal_quantile(0.5 * (1.0 + level));
    std::vector<WaldInterval> out(fit.k());
    for (std::size_t j = 0; j < fit.k(); ++j) {
        double se = fit.std_errors[j];
        out[j].lower = fit.estimates[j] - z * se;
        out[j].upper = fit.estimates[j] + z * se;
    }
    return out;
}

std::size_t select_by_aic(const std::vector<FitResult>& fits) {
    if (fits.empty()) throw std::invalid_argument("select_by_aic: no fits");
    std::size_t best = 0;
    for (std::size_t i = 1; i < fits.size(); ++i) {
        if (fits[i].aic < fits[best].aic ||
            (fits[i].aic == fits[best].aic && fits[i].k() < fits[best].k())) {
            best = i;
        }
    }
    return best;
}

bool cholesky_factor(std::vector<double>& a, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (std::size_t p = 0; p < j; ++p) s -= a[i * k + p] * a[j * k + p];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                a[i * k + i] = std::sqrt(s);
            } else {
                a[i * k + j] = s / a[j * k + j];
            }
        }
        for (std::size_t j = i + 1; j < k; ++j) a[i * k + j] = 0.0;
    }
    return true;
}

std::vector<double> spd_inverse(std::vector<double> a, std::size_t k) {
    if (!cholesky_factor(a, k)) {
        throw NumericalError("spd_inverse: matrix is not positive definite");
    }
    // invert via L: solve L L^T X = I column by column
    std::vector<double> inv(k * k, 0.0);
    std::vector<double> col(k);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < k; ++i) {
            double s = i == c ? 1.0 : 0.0;
            for (std::size_t j = 0; j < i; ++j) s -= a[i * k + j] * col[j];
            col[i] = s / a[i * k + i];
        }
        for (std::size_t i = k; i-- > 0;) {
            double s = col[i];
            for (std::size_t j = i + 1; j < k; ++j) s -= a[j * k + i] * col[j];
            col[i] = s / a[i * k + i];
        }
        for (std::size_t i = 0; i < k; ++i) inv[i * k + c] = col[i];
    }
    return inv;
}

}  // namespace zacr
