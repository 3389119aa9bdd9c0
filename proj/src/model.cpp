#include "zacr/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zacr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_unit_open(double f) {
    if (f <= 0.0) return 1e-300;
    if (f >= 1.0) return 1.0 - 1.1e-16;
    return f;
}

}  // namespace

ZacrVariant ZacrVariant::neg_binomial(double eta) {
    if (!std::isfinite(eta) || eta < -1.0 || eta == 0.0) {
        throw std::invalid_argument(
            "neg_binomial variant: eta must be finite, >= -1 and nonzero "
            "(use the promotion variant for the eta -> 0 limit)");
    }
    return {VariantKind::NegBinomial, eta};
}

const char* ZacrVariant::name() const {
    switch (kind) {
        case VariantKind::StandardMixture: return "mixture";
        case VariantKind::Promotion: return "promotion";
        case VariantKind::Geometric: return "geo";
        case VariantKind::NegBinomial: return "nb";
    }
    return "?";
}

ZacrVariant variant_from_name(const std::string& name, double eta_nb) {
    if (name == "mixture") return ZacrVariant::standard_mixture();
    if (name == "promotion") return ZacrVariant::promotion();
    if (name == "geo") return ZacrVariant::geometric();
    if (name == "nb") return ZacrVariant::neg_binomial(eta_nb);
    throw std::invalid_argument("unknown variant '" + name +
                                "' (expected mixture, promotion, geo or nb)");
}

bool ZacrModel::feasible(ZacrVariant v, const LogNormalParams& base,
                         double cure_par, double zero_par) {
    if (!(base.sigma > 0.0) || !std::isfinite(base.sigma) || !std::isfinite(base.mu)) return false;
    if (!std::isfinite(cure_par) || !std::isfinite(zero_par)) return false;
    switch (v.kind) {
        case VariantKind::StandardMixture: {
            double p0 = cure_par, p1 = zero_par;
            return p0 >= 0.0 && p0 < 1.0 && p1 >= 0.0 && p1 <= 1.0 && p0 + p1 <= 1.0;
        }
        case VariantKind::Promotion: {
            double theta = cure_par, tau = zero_par;
            return theta > 0.0 && tau > 0.0 &&
                   std::exp(-theta) + std::exp(-tau) <= 1.0;
        }
        case VariantKind::Geometric:
        case VariantKind::NegBinomial: {
            double eta = v.count_eta();
            double alpha0 = cure_par, alpha1 = zero_par;
            if (!(alpha0 > 0.0) || !(alpha1 > 0.0)) return false;
            if (v.kind == VariantKind::NegBinomial &&
                (!std::isfinite(eta) || eta < -1.0 || eta == 0.0)) {
                return false;
            }
            if (!(eta * alpha0 + 1.0 > 0.0) || !(eta * alpha1 + 1.0 > 0.0)) return false;
            double cure = std::exp(-std::log1p(eta * alpha0) / eta);
            double zero = std::exp(-std::log1p(eta * alpha1) / eta);
            return cure + zero <= 1.0;
        }
    }
    return false;
}

ZacrModel ZacrModel::make(ZacrVariant v, const LogNormalParams& base,
                          double cure_par, double zero_par) {
    return ZacrModel(v, base, cure_par, zero_par);
}

ZacrModel ZacrModel::standard_mixture(const LogNormalParams& base, double p0, double p1) {
    return make(ZacrVariant::standard_mixture(), base, p0, p1);
}

ZacrModel ZacrModel::promotion(const LogNormalParams& base, double theta, double tau) {
    return make(ZacrVariant::promotion(), base, theta, tau);
}

ZacrModel ZacrModel::geometric(const LogNormalParams& base, double alpha0, double alpha1) {
    return make(ZacrVariant::geometric(), base, alpha0, alpha1);
}

ZacrModel ZacrModel::neg_binomial(double eta, const LogNormalParams& base,
                                  double alpha0, double alpha1) {
    return make(ZacrVariant::neg_binomial(eta), base, alpha0, alpha1);
}

ZacrModel::ZacrModel(ZacrVariant v, const LogNormalParams& base,
                     double cure_par, double zero_par)
    : variant_(v), base_(base), cure_par_(cure_par), zero_par_(zero_par) {
    if (!feasible(v, base, cure_par, zero_par)) {
        throw std::invalid_argument(
            std::string(v.name()) +
            " model: parameters violate the domain (positivity / unit-interval / "
            "event-weight constraints)");
    }

    switch (v.kind) {
        case VariantKind::StandardMixture: {
            cure_ = cure_par;
            zero_ = zero_par;
            one_minus_cure_ = 1.0 - cure_par;
            log_one_minus_cure_ = std::log1p(-cure_par);
            log_cure_par_ = 0.0;
            c0_ = 0.0;
            inv_eta_p1_ = 0.0;
            break;
        }
        case VariantKind::Promotion: {
            cure_ = std::exp(-cure_par);
            zero_ = std::exp(-zero_par);
            one_minus_cure_ = -std::expm1(-cure_par);
            log_one_minus_cure_ = std::log(one_minus_cure_);
            log_cure_par_ = std::log(cure_par);
            c0_ = 0.0;
            inv_eta_p1_ = 0.0;
            break;
        }
        case VariantKind::Geometric:
        case VariantKind::NegBinomial: {
            double eta = v.count_eta();
            c0_ = std::log1p(eta * cure_par);
            cure_ = std::exp(-c0_ / eta);
            zero_ = std::exp(-std::log1p(eta * zero_par) / eta);
            one_minus_cure_ = -std::expm1(-c0_ / eta);
            log_one_minus_cure_ = std::log(one_minus_cure_);
            log_cure_par_ = std::log(cure_par);
            inv_eta_p1_ = 1.0 / eta + 1.0;
            break;
        }
    }
    weight_ = 1.0 - cure_ - zero_;
    if (weight_ < 0.0) weight_ = 0.0;  // guard the last bit of rounding
    b_weight_ = one_minus_cure_ > 0.0 ? zero_ / one_minus_cure_ : 0.0;
    log_weight_ = std::log(weight_);
}

double ZacrModel::population_survival_from_cdf(double F) const {
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            return cure_ + weight_ * (1.0 - F);
        case VariantKind::Promotion: {
            double A = std::exp(-cure_par_ * F);
            return A - b_weight_ * (A - cure_);
        }
        default: {
            double A = std::exp(-std::log1p(variant_.count_eta() * cure_par_ * F) /
                                variant_.count_eta());
            return A - b_weight_ * (A - cure_);
        }
    }
}

double ZacrModel::proper_survival_from_cdf(double F) const {
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            return 1.0 - F;
        case VariantKind::Promotion: {
            double theta = cure_par_;
            return std::exp(-theta * F) * std::expm1(-theta * (1.0 - F)) / std::expm1(-theta);
        }
        default: {
            double eta = variant_.count_eta();
            double l = std::log1p(eta * cure_par_ * F);
            return std::exp(-l / eta) * std::expm1((l - c0_) / eta) / std::expm1(-c0_ / eta);
        }
    }
}

double ZacrModel::population_survival(double y) const {
    if (y < 0.0 || std::isnan(y)) {
        throw std::domain_error("population_survival: y must be nonnegative");
    }
    return population_survival_from_cdf(y == 0.0 ? 0.0 : base_.cdf(y));
}

double ZacrModel::proper_survival(double y) const {
    if (y < 0.0 || std::isnan(y)) {
        throw std::domain_error("proper_survival: y must be nonnegative");
    }
    return proper_survival_from_cdf(y == 0.0 ? 0.0 : base_.cdf(y));
}

double ZacrModel::population_density(double y) const {
    if (y < 0.0 || std::isnan(y)) {
        throw std::domain_error("population_density: y must be nonnegative");
    }
    if (y == 0.0) return zero_;
    if (weight_ == 0.0) return 0.0;
    return weight_ * proper_density(y);
}

double ZacrModel::proper_density(double y) const {
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            return base_.pdf(y);
        case VariantKind::Promotion: {
            double theta = cure_par_;
            return theta * base_.pdf(y) * std::exp(-theta * base_.cdf(y)) / one_minus_cure_;
        }
        default: {
            double eta = variant_.count_eta();
            double l = std::log1p(eta * cure_par_ * base_.cdf(y));
            return cure_par_ * base_.pdf(y) * std::exp(-inv_eta_p1_ * l) / one_minus_cure_;
        }
    }
}

double ZacrModel::log_proper_density(double y) const {
    double logf = base_.log_pdf(y);
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            return logf;
        case VariantKind::Promotion:
            return log_cure_par_ + logf - cure_par_ * base_.cdf(y) - log_one_minus_cure_;
        default: {
            double eta = variant_.count_eta();
            double l = std::log1p(eta * cure_par_ * base_.cdf(y));
            return log_cure_par_ + logf - inv_eta_p1_ * l - log_one_minus_cure_;
        }
    }
}

double ZacrModel::log_event_density_from_cdf(double F, double baseline_log_pdf) const {
    if (weight_ <= 0.0) return -kInf;
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            return log_weight_ + baseline_log_pdf;
        case VariantKind::Promotion:
            return log_weight_ + log_cure_par_ + baseline_log_pdf - cure_par_ * F -
                   log_one_minus_cure_;
        default: {
            double eta = variant_.count_eta();
            double l = std::log1p(eta * cure_par_ * F);
            return log_weight_ + log_cure_par_ + baseline_log_pdf - inv_eta_p1_ * l -
                   log_one_minus_cure_;
        }
    }
}

double ZacrModel::proper_quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0)) {
        throw std::domain_error("proper_quantile: u must lie strictly in (0, 1)");
    }
    double F;
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            F = u;
            break;
        case VariantKind::Promotion:
            F = -std::log1p(u * std::expm1(-cure_par_)) / cure_par_;
            break;
        default: {
            double eta = variant_.count_eta();
            double target = 1.0 - u * one_minus_cure_;
            F = std::expm1(-eta * std::log(target)) / (eta * cure_par_);
            break;
        }
    }
    return base_.quantile(clamp_unit_open(F));
}

CauseCount ZacrModel::cause_count() const {
    switch (variant_.kind) {
        case VariantKind::StandardMixture:
            return CauseCount(1.0 - cure_par_, -1.0);
        case VariantKind::Promotion:
            return CauseCount(cure_par_, 0.0);
        default:
            return CauseCount(cure_par_, variant_.count_eta());
    }
}

double ZacrModel::series_survival_oracle(double y, int n_max) const {
    if (y < 0.0 || std::isnan(y)) {
        throw std::domain_error("series_survival_oracle: y must be nonnegative");
    }
    if (n_max < 1) {
        throw std::domain_error("series_survival_oracle: n_max must be >= 1");
    }
    std::vector<double> pmf;
    if (variant_.kind == VariantKind::StandardMixture && cure_par_ == 0.0) {
        // single deterministic cause; the Bernoulli law degenerates
        pmf.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        pmf[1] = 1.0;
    } else {
        pmf = cause_count().pmf_table(n_max);
    }
    double S = y == 0.0 ? 1.0 : 1.0 - base_.cdf(y);
    double sum_a = pmf[0];
    double power = 1.0;
    double sum_tail = 0.0;  // sum over n >= 1 of pmf[n] * S^n
    for (int n = 1; n <= n_max; ++n) {
        power *= S;
        sum_a += pmf[n] * power;
        sum_tail += pmf[n] * power;
    }
    double bw = zero_ / (1.0 - pmf[0]);
    return sum_a - bw * sum_tail;
}

}  // namespace zacr
