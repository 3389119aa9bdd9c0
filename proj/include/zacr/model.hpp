#pragma once

#include <string>

#include "zacr/baseline.hpp"
#include "zacr/causes.hpp"

namespace zacr {

enum class VariantKind { StandardMixture, Promotion, Geometric, NegBinomial };

// Which member of the zero-adjusted cure-rate family is in play. Only the
// NegBinomial variant carries a free dispersion eta; the others are the
// fixed points eta = -1 (mixture), eta -> 0 (promotion), eta = 1 (geometric).
struct ZacrVariant {
    VariantKind kind = VariantKind::StandardMixture;
    double eta = 0.0;

    static ZacrVariant standard_mixture() { return {VariantKind::StandardMixture, -1.0}; }
    static ZacrVariant promotion() { return {VariantKind::Promotion, 0.0}; }
    static ZacrVariant geometric() { return {VariantKind::Geometric, 1.0}; }
    static ZacrVariant neg_binomial(double eta);

    // dispersion of the implied latent cause-count law
    double count_eta() const { return eta; }
    const char* name() const;
};

ZacrVariant variant_from_name(const std::string& name, double eta_nb);

// Population lifetime model with an atom at zero and a cure plateau:
//
//   S_zp(y) = cure + (1 - cure - zero) * S_proper(y),        y >= 0,
//
// where S_proper is a proper survival function on (0, inf). Parameters are
// held in the identifiable products for the geometric / negative-binomial
// variants (alpha0 = theta * pi0, alpha1 = theta * pi1).
class ZacrModel {
public:
    static ZacrModel standard_mixture(const LogNormalParams& base, double p0, double p1);
    static ZacrModel promotion(const LogNormalParams& base, double theta, double tau);
    static ZacrModel geometric(const LogNormalParams& base, double alpha0, double alpha1);
    static ZacrModel neg_binomial(double eta, const LogNormalParams& base,
                                  double alpha0, double alpha1);

    // cure_par is p0 / theta / alpha0, zero_par is p1 / tau / alpha1
    static ZacrModel make(ZacrVariant v, const LogNormalParams& base,
                          double cure_par, double zero_par);
    static bool feasible(ZacrVariant v, const LogNormalParams& base,
                         double cure_par, double zero_par);

    const ZacrVariant& variant() const { return variant_; }
    const LogNormal& baseline() const { return base_; }
    double cure_parameter() const { return cure_par_; }
    double zero_parameter() const { return zero_par_; }

    double zero_fraction() const { return zero_; }
    double cure_fraction() const { return cure_; }
    double event_weight() const { return weight_; }

    double population_survival(double y) const;
    // mass of the atom at y == 0, density (event_weight * proper_density) for y > 0
    double population_density(double y) const;

    double proper_survival(double y) const;
    double proper_density(double y) const;
    double log_proper_density(double y) const;
    double proper_quantile(double u) const;

    // Same quantities evaluated from a precomputed baseline CDF value;
    // the likelihood loop uses these to share one CDF evaluation per point.
    double population_survival_from_cdf(double F) const;
    double proper_survival_from_cdf(double F) const;
    double log_event_density_from_cdf(double F, double baseline_log_pdf) const;

    // Truncated series form of the population survival built from the latent
    // cause-count pmf; an independent route to population_survival used for
    // cross-checking.
    double series_survival_oracle(double y, int n_max) const;
    CauseCount cause_count() const;

private:
    ZacrModel(ZacrVariant v, const LogNormalParams& base, double cure_par, double zero_par);

    ZacrVariant variant_;
    LogNormal base_;
    double cure_par_;
    double zero_par_;

    double zero_;
    double cure_;
    double weight_;
    double one_minus_cure_;
    double b_weight_;          // zero / (1 - cure)
    double log_one_minus_cure_;
    double log_weight_;
    double log_cure_par_;
    double c0_;                // log1p(eta * alpha0), geo/nb only
    double inv_eta_p1_;        // 1/eta + 1, geo/nb only
};

}  // namespace zacr
