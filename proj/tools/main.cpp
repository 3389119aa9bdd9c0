#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zacr/errors.hpp"
#include "zacr/inference.hpp"
#include "zacr/io.hpp"
#include "zacr/kaplan_meier.hpp"
#include "zacr/model.hpp"
#include "zacr/report.hpp"
#include "zacr/simulate.hpp"

namespace {

using zacr::CensoringKind;
using zacr::CensoringSpec;
using zacr::FitConfig;
using zacr::FitResult;
using zacr::JsonValue;
using zacr::SurvivalDataset;
using zacr::ZacrModel;
using zacr::ZacrVariant;

std::string g17(double v) { return JsonValue::format_number(v); }

void print_error_json(const char* type, const std::string& message) {
    JsonValue inner = JsonValue::object();
    inner.set("type", type);
    inner.set("message", message);
    JsonValue err = JsonValue::object();
    err.set("error", std::move(inner));
    std::cerr << err.dump_string() << "\n";
}

// "-" (or empty) means stdout
void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw zacr::DataError(path + ": cannot open for writing");
    out << content;
}

std::vector<double> parse_time_list(const std::string& csv) {
    std::vector<double> times;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        char* end = nullptr;
        double t = std::strtod(field.c_str(), &end);
        if (end == field.c_str() || *end != '\0') {
            throw std::invalid_argument("--times: cannot parse '" + field + "'");
        }
        times.push_back(t);
    }
    return times;
}

struct TruthFlags {
    std::string variant;
    double eta = 0.5;
    double mu = 0.0;
    double sigma = 1.0;
    std::optional<double> p0, p1, theta, tau, alpha0, alpha1;
};

void add_truth_flags(CLI::App* cmd, TruthFlags& t) {
    cmd->add_option("--variant", t.variant, "family member: mixture, promotion, geo, nb")
        ->required()
        ->check(CLI::IsMember({"mixture", "promotion", "geo", "nb"}));
    cmd->add_option("--eta", t.eta, "dispersion of the latent count law (nb only)");
    cmd->add_option("--mu", t.mu, "log-normal location")->required();
    cmd->add_option("--sigma", t.sigma, "log-normal scale")->required();
    cmd->add_option("--p0", t.p0, "cure mass (mixture)");
    cmd->add_option("--p1", t.p1, "zero mass (mixture)");
    cmd->add_option("--theta", t.theta, "mean latent cause count (promotion)");
    cmd->add_option("--tau", t.tau, "zero-atom rate (promotion)");
    cmd->add_option("--alpha0", t.alpha0, "theta*pi0 (geo/nb)");
    cmd->add_option("--alpha1", t.alpha1, "theta*pi1 (geo/nb)");
}

double require_flag(const std::optional<double>& v, const char* flag,
                    const std::string& variant) {
    if (!v) {
        throw std::invalid_argument(std::string("--") + flag + " is required for --variant " +
                                    variant);
    }
    return *v;
}

void reject_flag(const std::optional<double>& v, const char* flag,
                 const std::string& variant) {
    if (v) {
        throw std::invalid_argument(std::string("--") + flag + " does not apply to --variant " +
                                    variant);
    }
}

ZacrModel truth_from_flags(const TruthFlags& t) {
    ZacrVariant v = zacr::variant_from_name(t.variant, t.eta);
    zacr::LogNormalParams base{t.mu, t.sigma};
    switch (v.kind) {
        case zacr::VariantKind::StandardMixture: {
            reject_flag(t.theta, "theta", t.variant);
            reject_flag(t.tau, "tau", t.variant);
            reject_flag(t.alpha0, "alpha0", t.variant);
            reject_flag(t.alpha1, "alpha1", t.variant);
            return ZacrModel::standard_mixture(base, require_flag(t.p0, "p0", t.variant),
                                               require_flag(t.p1, "p1", t.variant));
        }
        case zacr::VariantKind::Promotion: {
            reject_flag(t.p0, "p0", t.variant);
            reject_flag(t.p1, "p1", t.variant);
            reject_flag(t.alpha0, "alpha0", t.variant);
            reject_flag(t.alpha1, "alpha1", t.variant);
            return ZacrModel::promotion(base, require_flag(t.theta, "theta", t.variant),
                                        require_flag(t.tau, "tau", t.variant));
        }
        default: {
            reject_flag(t.p0, "p0", t.variant);
            reject_flag(t.p1, "p1", t.variant);
            reject_flag(t.theta, "theta", t.variant);
            reject_flag(t.tau, "tau", t.variant);
            double a0 = require_flag(t.alpha0, "alpha0", t.variant);
            double a1 = require_flag(t.alpha1, "alpha1", t.variant);
            return ZacrModel::make(v, base, a0, a1);
        }
    }
}

struct CensFlags {
    std::string kind = "none";
    std::optional<double> parameter;
    std::optional<double> target;
};

void add_cens_flags(CLI::App* cmd, CensFlags& c) {
    cmd->add_option("--censoring", c.kind, "censoring law: none, uniform, exponential")
        ->check(CLI::IsMember({"none", "uniform", "exponential"}));
    CLI::Option* par = cmd->add_option("--cens-param", c.parameter,
                                       "upper bound (uniform) or rate (exponential)");
    CLI::Option* tgt =
        cmd->add_option("--target-censoring", c.target,
                        "calibrate the law so the expected censoring rate hits this value");
    par->excludes(tgt);
    tgt->excludes(par);
}

CensoringSpec cens_from_flags(const CensFlags& c, const ZacrModel& m) {
    if (c.kind == "none") {
        if (c.parameter || c.target) {
            throw std::invalid_argument(
                "--cens-param/--target-censoring need --censoring uniform or exponential");
        }
        return CensoringSpec::none();
    }
    CensoringKind kind =
        c.kind == "uniform" ? CensoringKind::Uniform : CensoringKind::Exponential;
    if (c.target) return zacr::calibrate_censoring(m, kind, *c.target);
    if (!c.parameter) {
        throw std::invalid_argument("--censoring " + c.kind +
                                    " needs --cens-param or --target-censoring");
    }
    return kind == CensoringKind::Uniform ? CensoringSpec::uniform(*c.parameter)
                                          : CensoringSpec::exponential(*c.parameter);
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("--level must lie strictly between 0 and 1");
    }
}

JsonValue fit_json(const FitResult& f, double ci_level) {
    std::vector<zacr::WaldInterval> ci = zacr::wald_intervals(f, ci_level);
    JsonValue names = JsonValue::array();
    for (const std::string& n : f.parameter_names) names.push(n);
    JsonValue lower = JsonValue::array();
    JsonValue upper = JsonValue::array();
    for (const zacr::WaldInterval& w : ci) {
        lower.push(w.lower);
        upper.push(w.upper);
    }
    JsonValue o = JsonValue::object();
    o.set("variant", f.variant.name());
    o.set("eta", f.variant.eta);
    o.set("parameter_names", std::move(names));
    o.set("estimates", JsonValue::array_of(f.estimates));
    o.set("std_errors", JsonValue::array_of(f.std_errors));
    o.set("ci_level", ci_level);
    o.set("ci_lower", std::move(lower));
    o.set("ci_upper", std::move(upper));
    o.set("log_lik", f.log_lik);
    o.set("aic", f.aic);
    o.set("converged", f.converged);
    o.set("n_restarts_used", f.n_restarts_used);
    o.set("grad_max_norm", f.grad_max_norm);
    o.set("information_pd", f.information_pd);
    return o;
}

std::vector<ZacrVariant> comparison_variants(double eta_nb) {
    return {ZacrVariant::standard_mixture(), ZacrVariant::promotion(),
            ZacrVariant::neg_binomial(eta_nb), ZacrVariant::geometric()};
}

struct CurveBundle {
    std::vector<double> time;
    std::vector<double> km;
    std::vector<std::vector<double>> fitted;  // parallel to the fits
};

CurveBundle build_curves(const SurvivalDataset& data, const std::vector<FitResult>& fits,
                         int n_points) {
    if (n_points < 2) throw std::invalid_argument("--points must be at least 2");
    double t_max = 0.0;
    for (const zacr::Observation& o : data.observations()) t_max = std::max(t_max, o.time);
    if (t_max <= 0.0) t_max = 1.0;
    zacr::KaplanMeierCurve curve = zacr::kaplan_meier(data);

    CurveBundle b;
    std::vector<ZacrModel> models;
    models.reserve(fits.size());
    for (const FitResult& f : fits) {
        models.push_back(zacr::model_from_parameters(f.variant, f.estimates));
    }
    b.fitted.resize(fits.size());
    for (int i = 0; i < n_points; ++i) {
        double t = t_max * static_cast<double>(i) / (n_points - 1.0);
        b.time.push_back(t);
        b.km.push_back(curve.survival_at(t));
        for (std::size_t j = 0; j < models.size(); ++j) {
            b.fitted[j].push_back(models[j].population_survival(t));
        }
    }
    return b;
}

std::string km_csv(const zacr::KaplanMeierCurve& c) {
    std::ostringstream os;
    os << "time,survival,at_risk,events\n";
    for (const zacr::KaplanMeierStep& s : c.steps) {
        os << g17(s.time) << "," << g17(s.survival) << "," << s.at_risk << "," << s.events
           << "\n";
    }
    return os.str();
}

std::string curves_csv(const CurveBundle& b, const std::vector<FitResult>& fits) {
    std::ostringstream os;
    os << "time,km";
    for (const FitResult& f : fits) os << "," << f.variant.name();
    os << "\n";
    for (std::size_t i = 0; i < b.time.size(); ++i) {
        os << g17(b.time[i]) << "," << g17(b.km[i]);
        for (const std::vector<double>& col : b.fitted) os << "," << g17(col[i]);
        os << "\n";
    }
    return os.str();
}

std::string format_mc_text(const zacr::MonteCarloReport& r) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "monte carlo study: variant=%s  n=%zu  B=%d  seed=%llu\n",
                  r.variant.name(), r.sample_size, r.n_replications,
                  static_cast<unsigned long long>(r.seed));
    os << buf;
    std::snprintf(buf, sizeof buf, "  %-10s %10s %11s %11s %11s\n", "parameter", "truth",
                  "bias", "rmse", "coverage");
    os << buf;
    for (std::size_t j = 0; j < r.rows.size(); ++j) {
        std::snprintf(buf, sizeof buf, "  %-10s %10.4f %11.4f %11.4f %11.4f\n",
                      r.rows[j].parameter.c_str(), r.truth[j], r.rows[j].bias, r.rows[j].rmse,
                      r.rows[j].cp);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "mean censoring rate: %.4f   converged: %d/%d\n",
                  r.mean_censoring_rate, r.n_converged, r.n_replications);
    os << buf;
    if (r.convergence_warning) {
        os << "warning: more than 20% of replications failed to converge\n";
    }
    return os.str();
}

JsonValue mc_json(const zacr::MonteCarloReport& r, double ci_level) {
    JsonValue rows = JsonValue::array();
    for (const zacr::MonteCarloRow& row : r.rows) {
        JsonValue o = JsonValue::object();
        o.set("parameter", row.parameter);
        o.set("bias", row.bias);
        o.set("rmse", row.rmse);
        o.set("cp", row.cp);
        rows.push(std::move(o));
    }
    JsonValue o = JsonValue::object();
    o.set("variant", r.variant.name());
    o.set("eta", r.variant.eta);
    o.set("truth", JsonValue::array_of(r.truth));
    o.set("n", static_cast<unsigned long long>(r.sample_size));
    o.set("B", r.n_replications);
    o.set("seed", static_cast<unsigned long long>(r.seed));
    o.set("ci_level", ci_level);
    o.set("rows", std::move(rows));
    o.set("mean_censoring_rate", r.mean_censoring_rate);
    o.set("n_converged", r.n_converged);
    o.set("convergence_warning", r.convergence_warning);
    o.set("max_grad_norm", r.max_grad_norm);
    o.set("n_information_not_pd", r.n_information_not_pd);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-adjusted cure-rate survival modeling toolkit"};
    app.require_subcommand(1);

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "maximum likelihood fit of one variant");
    std::string fit_data, fit_variant, fit_json_path;
    double fit_eta = 0.5, fit_level = 0.95;
    std::uint64_t fit_seed = 0;
    int fit_starts = 5;
    fit_cmd->add_option("--data", fit_data, "input CSV with header time,status")->required();
    fit_cmd->add_option("--variant", fit_variant, "mixture, promotion, geo, nb")
        ->required()
        ->check(CLI::IsMember({"mixture", "promotion", "geo", "nb"}));
    fit_cmd->add_option("--eta", fit_eta, "dispersion (nb only)");
    fit_cmd->add_option("--seed", fit_seed, "seed for the multi-start perturbations");
    fit_cmd->add_option("--starts", fit_starts, "number of optimizer starts")
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--level", fit_level, "confidence level for Wald intervals");
    fit_cmd->add_option("--json", fit_json_path, "write the fit as JSON ('-' for stdout)");
    fit_cmd->callback([&] {
        check_level(fit_level);
        SurvivalDataset data = zacr::load_dataset_csv(fit_data);
        ZacrVariant v = zacr::variant_from_name(fit_variant, fit_eta);
        FitConfig cfg;
        cfg.seed = fit_seed;
        cfg.n_starts = fit_starts;
        FitResult f = zacr::fit_mle(v, data, cfg);
        if (fit_json_path != "-") std::cout << zacr::format_fit_text(f, fit_level);
        if (!fit_json_path.empty()) {
            write_output(fit_json_path, fit_json(f, fit_level).dump_string(2) + "\n");
        }
    });

    // ---- compare ----
    auto* cmp_cmd =
        app.add_subcommand("compare", "fit all four variants and rank them by AIC");
    std::string cmp_data, cmp_json_path, cmp_times = "0,6,12,18";
    double cmp_eta = 0.5, cmp_level = 0.95;
    std::uint64_t cmp_seed = 0;
    int cmp_points = 201;
    cmp_cmd->add_option("--data", cmp_data, "input CSV with header time,status")->required();
    cmp_cmd->add_option("--eta", cmp_eta, "dispersion for the nb column");
    cmp_cmd->add_option("--seed", cmp_seed, "seed for the multi-start perturbations");
    cmp_cmd->add_option("--level", cmp_level, "confidence level in the JSON report");
    cmp_cmd->add_option("--times", cmp_times, "comma-separated grid for the survival table");
    cmp_cmd->add_option("--points", cmp_points, "curve grid resolution in the JSON report");
    cmp_cmd->add_option("--json", cmp_json_path, "write the full bundle as JSON");
    cmp_cmd->callback([&] {
        check_level(cmp_level);
        std::vector<double> times = parse_time_list(cmp_times);
        SurvivalDataset data = zacr::load_dataset_csv(cmp_data);
        FitConfig cfg;
        cfg.seed = cmp_seed;
        std::vector<FitResult> fits;
        for (ZacrVariant v : comparison_variants(cmp_eta)) {
            fits.push_back(zacr::fit_mle(v, data, cfg));
        }
        std::size_t best = zacr::select_by_aic(fits);
        ZacrModel best_model =
            zacr::model_from_parameters(fits[best].variant, fits[best].estimates);
        std::vector<zacr::SurvivalTableRow> table = zacr::survival_table(best_model, times);

        if (cmp_json_path != "-") {
            std::cout << zacr::format_comparison_text(fits);
            std::cout << "\nsurvival table (" << fits[best].variant.name() << ")\n"
                      << zacr::format_survival_table_text(table);
        }
        if (!cmp_json_path.empty()) {
            CurveBundle curves = build_curves(data, fits, cmp_points);
            JsonValue fits_json = JsonValue::array();
            for (const FitResult& f : fits) fits_json.push(fit_json(f, cmp_level));
            JsonValue ranking = JsonValue::array();
            for (const std::string& name : zacr::aic_ranking(fits)) ranking.push(name);
            JsonValue st = JsonValue::object();
            st.set("times", JsonValue::array_of(times));
            {
                std::vector<double> surv;
                for (const zacr::SurvivalTableRow& r : table) surv.push_back(r.survival);
                st.set("survival", JsonValue::array_of(surv));
            }
            JsonValue curves_json = JsonValue::object();
            curves_json.set("time", JsonValue::array_of(curves.time));
            curves_json.set("km", JsonValue::array_of(curves.km));
            for (std::size_t j = 0; j < fits.size(); ++j) {
                curves_json.set(fits[j].variant.name(),
                                JsonValue::array_of(curves.fitted[j]));
            }
            JsonValue bundle = JsonValue::object();
            bundle.set("fits", std::move(fits_json));
            bundle.set("aic_ranking", std::move(ranking));
            bundle.set("best", fits[best].variant.name());
            bundle.set("survival_table", std::move(st));
            bundle.set("curves", std::move(curves_json));
            write_output(cmp_json_path, bundle.dump_string(2) + "\n");
        }
    });

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "draw a dataset from a known model");
    TruthFlags sim_truth;
    CensFlags sim_cens;
    std::string sim_out = "-";
    std::uint64_t sim_seed = 0;
    std::size_t sim_n = 0;
    add_truth_flags(sim_cmd, sim_truth);
    add_cens_flags(sim_cmd, sim_cens);
    sim_cmd->add_option("--n", sim_n, "sample size")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_seed, "simulation seed");
    sim_cmd->add_option("--out", sim_out, "output CSV path ('-' for stdout)");
    sim_cmd->callback([&] {
        ZacrModel truth = truth_from_flags(sim_truth);
        CensoringSpec cens = cens_from_flags(sim_cens, truth);
        SurvivalDataset data = zacr::sample_dataset(truth, sim_n, cens, sim_seed);
        std::ostringstream os;
        zacr::write_dataset_csv(data, os);
        write_output(sim_out, os.str());
    });

    // ---- mc-study ----
    auto* mc_cmd = app.add_subcommand(
        "mc-study", "repeated simulate-and-refit study: bias, RMSE, coverage");
    TruthFlags mc_truth;
    CensFlags mc_cens;
    std::string mc_json_path;
    std::uint64_t mc_seed = 0;
    std::size_t mc_n = 0;
    int mc_reps = 0, mc_threads = 0;
    double mc_level = 0.95;
    add_truth_flags(mc_cmd, mc_truth);
    add_cens_flags(mc_cmd, mc_cens);
    mc_cmd->add_option("--n", mc_n, "sample size per replication")
        ->required()
        ->check(CLI::PositiveNumber);
    mc_cmd->add_option("--B", mc_reps, "number of replications")
        ->required()
        ->check(CLI::PositiveNumber);
    mc_cmd->add_option("--seed", mc_seed, "master seed");
    mc_cmd->add_option("--level", mc_level, "nominal coverage level");
    mc_cmd->add_option("--threads", mc_threads, "worker threads (0 = auto)");
    mc_cmd->add_option("--json", mc_json_path, "write the report as JSON ('-' for stdout)");
    mc_cmd->callback([&] {
        check_level(mc_level);
        ZacrModel truth = truth_from_flags(mc_truth);
        CensoringSpec cens = cens_from_flags(mc_cens, truth);
        zacr::MonteCarloConfig cfg;
        cfg.ci_level = mc_level;
        cfg.n_threads = mc_threads;
        zacr::MonteCarloReport report =
            zacr::monte_carlo_study(truth, mc_n, mc_reps, cens, mc_seed, cfg);
        if (mc_json_path != "-") std::cout << format_mc_text(report);
        if (!mc_json_path.empty()) {
            write_output(mc_json_path, mc_json(report, mc_level).dump_string(2) + "\n");
        }
    });

    // ---- km ----
    auto* km_cmd = app.add_subcommand("km", "Kaplan-Meier step function as CSV");
    std::string km_data, km_out = "-";
    km_cmd->add_option("--data", km_data, "input CSV with header time,status")->required();
    km_cmd->add_option("--out", km_out, "output CSV path ('-' for stdout)");
    km_cmd->callback([&] {
        SurvivalDataset data = zacr::load_dataset_csv(km_data);
        write_output(km_out, km_csv(zacr::kaplan_meier(data)));
    });

    // ---- curves ----
    auto* cur_cmd = app.add_subcommand(
        "curves", "Kaplan-Meier plus all four fitted survival curves on a grid, as CSV");
    std::string cur_data, cur_out = "-";
    double cur_eta = 0.5;
    std::uint64_t cur_seed = 0;
    int cur_points = 201;
    cur_cmd->add_option("--data", cur_data, "input CSV with header time,status")->required();
    cur_cmd->add_option("--eta", cur_eta, "dispersion for the nb column");
    cur_cmd->add_option("--seed", cur_seed, "seed for the multi-start perturbations");
    cur_cmd->add_option("--points", cur_points, "grid resolution");
    cur_cmd->add_option("--out", cur_out, "output CSV path ('-' for stdout)");
    cur_cmd->callback([&] {
        SurvivalDataset data = zacr::load_dataset_csv(cur_data);
        FitConfig cfg;
        cfg.seed = cur_seed;
        std::vector<FitResult> fits;
        for (ZacrVariant v : comparison_variants(cur_eta)) {
            fits.push_back(zacr::fit_mle(v, data, cfg));
        }
        CurveBundle curves = build_curves(data, fits, cur_points);
        write_output(cur_out, curves_csv(curves, fits));
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        if (code == 0) return 0;  // --help / --version
        print_error_json("UsageError", e.what());
        return 2;
    } catch (const zacr::DataError& e) {
        print_error_json("DataError", e.what());
        return 3;
    } catch (const zacr::NumericalError& e) {
        print_error_json("NumericalError", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        print_error_json("UsageError", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        print_error_json("UsageError", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error_json("Error", e.what());
        return 1;
    }
}
