#include "zacr/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace zacr {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string variant_label(const FitResult& fit) {
    std::string label = fit.variant.name();
    if (fit.variant.kind == VariantKind::NegBinomial) {
        label += " (eta=" + fmt("%g", fit.variant.eta) + ")";
    }
    return label;
}

}  // namespace

std::vector<SurvivalTableRow> survival_table(const ZacrModel& m,
                                             const std::vector<double>& times) {
    std::vector<SurvivalTableRow> rows;
    rows.reserve(times.size());
    double prev = -1.0;
    for (double t : times) {
        if (!(t >= 0.0)) {
            throw std::domain_error("survival_table: times must be nonnegative");
        }
        if (t < prev) {
            throw std::domain_error("survival_table: times must be nondecreasing");
        }
        prev = t;
        rows.push_back({t, m.population_survival(t)});
    }
    return rows;
}

std::vector<std::string> aic_ranking(const std::vector<FitResult>& fits) {
    std::vector<std::size_t> idx(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < idx.size(); ++i) {  // selection sort keeps it simple
        std::size_t best = i;
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            const FitResult& a = fits[idx[j]];
            const FitResult& b = fits[idx[best]];
            if (a.aic < b.aic || (a.aic == b.aic && a.k() < b.k())) best = j;
        }
        std::swap(idx[i], idx[best]);
    }
    std::vector<std::string> names;
    names.reserve(fits.size());
    for (std::size_t i : idx) names.push_back(variant_label(fits[i]));
    return names;
}

std::string format_fit_text(const FitResult& fit, double ci_level) {
    std::vector<WaldInterval> ci = wald_intervals(fit, ci_level);
    std::ostringstream os;
    os << "variant: " << variant_label(fit) << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-10s %12s %12s   %s\n", "parameter", "estimate",
                  "std.error", fmt("%.0f", 100.0 * ci_level).append("% interval").c_str());
    os << buf;
    for (std::size_t j = 0; j < fit.k(); ++j) {
        std::snprintf(buf, sizeof buf, "  %-10s %12.6g %12.6g   [%.6g, %.6g]\n",
                      fit.parameter_names[j].c_str(), fit.estimates[j], fit.std_errors[j],
                      ci[j].lower, ci[j].upper);
        os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "log-likelihood: %.6f   AIC: %.6f   converged: %s   starts: %d\n",
                  fit.log_lik, fit.aic, fit.converged ? "yes" : "no", fit.n_restarts_used);
    os << buf;
    return os.str();
}

std::string format_comparison_text(const std::vector<FitResult>& fits) {
    std::ostringstream os;
    char buf[96];
    os << "            ";
    for (const FitResult& f : fits) {
        std::snprintf(buf, sizeof buf, "%-26s", variant_label(f).c_str());
        os << buf;
    }
    os << "\n";
    std::size_t k = 0;
    for (const FitResult& f : fits) k = std::max(k, f.k());
    for (std::size_t j = 0; j < k; ++j) {
        std::snprintf(buf, sizeof buf, "param %-6zu", j + 1);
        os << buf;
        os << " ";
        for (const FitResult& f : fits) {
            if (j < f.k()) {
                std::string cell = f.parameter_names[j] + "=" + fmt("%.4f", f.estimates[j]) +
                                   " (" + fmt("%.4f", f.std_errors[j]) + ")";
                std::snprintf(buf, sizeof buf, "%-26s", cell.c_str());
            } else {
                std::snprintf(buf, sizeof buf, "%-26s", "");
            }
            os << buf;
        }
        os << "\n";
    }
    os << "log-lik     ";
    for (const FitResult& f : fits) {
        std::snprintf(buf, sizeof buf, "%-26.4f", f.log_lik);
        os << buf;
    }
    os << "\naic         ";
    for (const FitResult& f : fits) {
        std::snprintf(buf, sizeof buf, "%-26.4f", f.aic);
        os << buf;
    }
    os << "\n\naic ranking:";
    for (const std::string& name : aic_ranking(fits)) os << " " << name;
    os << "\n";
    return os.str();
}

std::string format_survival_table_text(const std::vector<SurvivalTableRow>& rows) {
    std::ostringstream os;
    os << "  time         survival\n";
    char buf[64];
    for (const SurvivalTableRow& r : rows) {
        std::snprintf(buf, sizeof buf, "  %-12.6g %.2f%%\n", r.time, 100.0 * r.survival);
        os << buf;
    }
    return os.str();
}

}  // namespace zacr
