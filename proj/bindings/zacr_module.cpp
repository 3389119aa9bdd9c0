#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zacr/errors.hpp"
#include "zacr/inference.hpp"
#include "zacr/io.hpp"
#include "zacr/kaplan_meier.hpp"
#include "zacr/model.hpp"
#include "zacr/report.hpp"
#include "zacr/simulate.hpp"

namespace py = pybind11;

namespace {

zacr::SurvivalDataset dataset_from_lists(const std::vector<double>& times,
                                         const std::vector<bool>& events) {
    if (times.size() != events.size()) {
        throw std::invalid_argument("times and events must have the same length");
    }
    std::vector<zacr::Observation> obs;
    obs.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) obs.push_back({times[i], events[i]});
    return zacr::SurvivalDataset(std::move(obs));
}

zacr::FitResult fit_mle_py(zacr::ZacrVariant v, const zacr::SurvivalDataset& data,
                           std::uint64_t seed, int n_starts, bool polish,
                           std::optional<std::vector<double>> initial) {
    zacr::FitConfig cfg;
    cfg.seed = seed;
    cfg.n_starts = n_starts;
    cfg.polish = polish;
    cfg.initial = std::move(initial);
    return zacr::fit_mle(v, data, cfg);
}

zacr::MonteCarloReport monte_carlo_py(const zacr::ZacrModel& truth, std::size_t n, int B,
                                      const zacr::CensoringSpec& cens, std::uint64_t seed,
                                      double ci_level, int n_threads) {
    zacr::MonteCarloConfig cfg;
    cfg.ci_level = ci_level;
    cfg.n_threads = n_threads;
    return zacr::monte_carlo_study(truth, n, B, cens, seed, cfg);
}

}  // namespace

PYBIND11_MODULE(_zacr, m) {
    m.doc() = "Zero-adjusted cure-rate survival models: population survival with an atom "
              "at zero and a cure plateau, censored maximum likelihood, simulation, and "
              "Kaplan-Meier estimation.";

    py::register_exception<zacr::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<zacr::NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<zacr::LogNormalParams>(m, "LogNormalParams")
        .def(py::init<double, double>(), py::arg("mu"), py::arg("sigma"))
        .def_readwrite("mu", &zacr::LogNormalParams::mu)
        .def_readwrite("sigma", &zacr::LogNormalParams::sigma);

    py::enum_<zacr::VariantKind>(m, "VariantKind")
        .value("StandardMixture", zacr::VariantKind::StandardMixture)
        .value("Promotion", zacr::VariantKind::Promotion)
        .value("Geometric", zacr::VariantKind::Geometric)
        .value("NegBinomial", zacr::VariantKind::NegBinomial);

    py::class_<zacr::ZacrVariant>(m, "ZacrVariant")
        .def_static("standard_mixture", &zacr::ZacrVariant::standard_mixture)
        .def_static("promotion", &zacr::ZacrVariant::promotion)
        .def_static("geometric", &zacr::ZacrVariant::geometric)
        .def_static("neg_binomial", &zacr::ZacrVariant::neg_binomial, py::arg("eta"))
        .def_readonly("kind", &zacr::ZacrVariant::kind)
        .def_readonly("eta", &zacr::ZacrVariant::eta)
        .def_property_readonly("name", &zacr::ZacrVariant::name)
        .def("__repr__", [](const zacr::ZacrVariant& v) {
            return std::string("ZacrVariant(") + v.name() + ")";
        });

    m.def("variant_from_name", &zacr::variant_from_name, py::arg("name"),
          py::arg("eta_nb") = 0.5);

    py::class_<zacr::ZacrModel>(m, "ZacrModel")
        .def_static("standard_mixture", &zacr::ZacrModel::standard_mixture, py::arg("base"),
                    py::arg("p0"), py::arg("p1"))
        .def_static("promotion", &zacr::ZacrModel::promotion, py::arg("base"),
                    py::arg("theta"), py::arg("tau"))
        .def_static("geometric", &zacr::ZacrModel::geometric, py::arg("base"),
                    py::arg("alpha0"), py::arg("alpha1"))
        .def_static("neg_binomial", &zacr::ZacrModel::neg_binomial, py::arg("eta"),
                    py::arg("base"), py::arg("alpha0"), py::arg("alpha1"))
        .def_static("make", &zacr::ZacrModel::make, py::arg("variant"), py::arg("base"),
                    py::arg("cure_par"), py::arg("zero_par"))
        .def_property_readonly("variant", &zacr::ZacrModel::variant)
        .def_property_readonly("zero_fraction", &zacr::ZacrModel::zero_fraction)
        .def_property_readonly("cure_fraction", &zacr::ZacrModel::cure_fraction)
        .def_property_readonly("event_weight", &zacr::ZacrModel::event_weight)
        .def("population_survival", &zacr::ZacrModel::population_survival, py::arg("y"))
        .def("population_density", &zacr::ZacrModel::population_density, py::arg("y"))
        .def("proper_survival", &zacr::ZacrModel::proper_survival, py::arg("y"))
        .def("proper_density", &zacr::ZacrModel::proper_density, py::arg("y"))
        .def("proper_quantile", &zacr::ZacrModel::proper_quantile, py::arg("u"))
        .def("series_survival_oracle", &zacr::ZacrModel::series_survival_oracle, py::arg("y"),
             py::arg("n_max"));

    py::class_<zacr::Observation>(m, "Observation")
        .def_readonly("time", &zacr::Observation::time)
        .def_readonly("event", &zacr::Observation::event)
        .def("__repr__", [](const zacr::Observation& o) {
            return "Observation(time=" + std::to_string(o.time) +
                   ", event=" + (o.event ? "True" : "False") + ")";
        });

    py::class_<zacr::SurvivalDataset>(m, "SurvivalDataset")
        .def(py::init(&dataset_from_lists), py::arg("times"), py::arg("events"))
        .def_property_readonly("observations", &zacr::SurvivalDataset::observations)
        .def("__len__", &zacr::SurvivalDataset::size)
        .def_property_readonly("zero_count", &zacr::SurvivalDataset::zero_count)
        .def_property_readonly("event_count", &zacr::SurvivalDataset::event_count)
        .def_property_readonly("censored_count", &zacr::SurvivalDataset::censored_count)
        .def_property_readonly("censored_fraction", &zacr::SurvivalDataset::censored_fraction);

    m.def("load_dataset_csv", &zacr::load_dataset_csv, py::arg("path"));

    m.def("parameter_names", &zacr::parameter_names, py::arg("variant"));
    m.def("parameters_of", &zacr::parameters_of, py::arg("model"));
    m.def("model_from_parameters", &zacr::model_from_parameters, py::arg("variant"),
          py::arg("params"));
    m.def("log_likelihood", &zacr::log_likelihood, py::arg("model"), py::arg("data"));

    py::class_<zacr::FitResult>(m, "FitResult")
        .def_readonly("variant", &zacr::FitResult::variant)
        .def_readonly("parameter_names", &zacr::FitResult::parameter_names)
        .def_readonly("estimates", &zacr::FitResult::estimates)
        .def_readonly("std_errors", &zacr::FitResult::std_errors)
        .def_readonly("covariance", &zacr::FitResult::covariance)
        .def_readonly("log_lik", &zacr::FitResult::log_lik)
        .def_readonly("aic", &zacr::FitResult::aic)
        .def_readonly("converged", &zacr::FitResult::converged)
        .def_readonly("n_restarts_used", &zacr::FitResult::n_restarts_used)
        .def_readonly("information_pd", &zacr::FitResult::information_pd)
        .def_readonly("grad_max_norm", &zacr::FitResult::grad_max_norm);

    m.def("fit_mle", &fit_mle_py, py::arg("variant"), py::arg("data"), py::arg("seed") = 0,
          py::arg("n_starts") = 5, py::arg("polish") = true,
          py::arg("initial") = std::nullopt, py::call_guard<py::gil_scoped_release>());

    m.def(
        "wald_intervals",
        [](const zacr::FitResult& fit, double level) {
            std::vector<std::pair<double, double>> out;
            for (const zacr::WaldInterval& w : zacr::wald_intervals(fit, level)) {
                out.emplace_back(w.lower, w.upper);
            }
            return out;
        },
        py::arg("fit"), py::arg("level") = 0.95);

    m.def("select_by_aic", &zacr::select_by_aic, py::arg("fits"));
    m.def("aic_ranking", &zacr::aic_ranking, py::arg("fits"));

    py::enum_<zacr::CensoringKind>(m, "CensoringKind")
        .value("none", zacr::CensoringKind::None)
        .value("uniform", zacr::CensoringKind::Uniform)
        .value("exponential", zacr::CensoringKind::Exponential);

    py::class_<zacr::CensoringSpec>(m, "CensoringSpec")
        .def_static("none", &zacr::CensoringSpec::none)
        .def_static("uniform", &zacr::CensoringSpec::uniform, py::arg("c_max"))
        .def_static("exponential", &zacr::CensoringSpec::exponential, py::arg("rate"))
        .def_readonly("kind", &zacr::CensoringSpec::kind)
        .def_readonly("parameter", &zacr::CensoringSpec::parameter)
        .def_property_readonly("name", &zacr::CensoringSpec::name);

    m.def("sample_dataset", &zacr::sample_dataset, py::arg("model"), py::arg("n"),
          py::arg("censoring"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def("expected_censoring_rate", &zacr::expected_censoring_rate, py::arg("model"),
          py::arg("censoring"));
    m.def("calibrate_censoring", &zacr::calibrate_censoring, py::arg("model"),
          py::arg("kind"), py::arg("target_rate"));

    py::class_<zacr::MonteCarloRow>(m, "MonteCarloRow")
        .def_readonly("parameter", &zacr::MonteCarloRow::parameter)
        .def_readonly("bias", &zacr::MonteCarloRow::bias)
        .def_readonly("rmse", &zacr::MonteCarloRow::rmse)
        .def_readonly("cp", &zacr::MonteCarloRow::cp);

    py::class_<zacr::MonteCarloReport>(m, "MonteCarloReport")
        .def_readonly("variant", &zacr::MonteCarloReport::variant)
        .def_readonly("truth", &zacr::MonteCarloReport::truth)
        .def_readonly("rows", &zacr::MonteCarloReport::rows)
        .def_readonly("n_replications", &zacr::MonteCarloReport::n_replications)
        .def_readonly("sample_size", &zacr::MonteCarloReport::sample_size)
        .def_readonly("seed", &zacr::MonteCarloReport::seed)
        .def_readonly("mean_censoring_rate", &zacr::MonteCarloReport::mean_censoring_rate)
        .def_readonly("n_converged", &zacr::MonteCarloReport::n_converged)
        .def_readonly("convergence_warning", &zacr::MonteCarloReport::convergence_warning)
        .def_readonly("max_grad_norm", &zacr::MonteCarloReport::max_grad_norm)
        .def_readonly("n_information_not_pd", &zacr::MonteCarloReport::n_information_not_pd);

    m.def("monte_carlo_study", &monte_carlo_py, py::arg("truth"), py::arg("n"), py::arg("B"),
          py::arg("censoring"), py::arg("seed"), py::arg("ci_level") = 0.95,
          py::arg("n_threads") = 0, py::call_guard<py::gil_scoped_release>());

    py::class_<zacr::KaplanMeierStep>(m, "KaplanMeierStep")
        .def_readonly("time", &zacr::KaplanMeierStep::time)
        .def_readonly("survival", &zacr::KaplanMeierStep::survival)
        .def_readonly("at_risk", &zacr::KaplanMeierStep::at_risk)
        .def_readonly("events", &zacr::KaplanMeierStep::events);

    py::class_<zacr::KaplanMeierCurve>(m, "KaplanMeierCurve")
        .def_readonly("steps", &zacr::KaplanMeierCurve::steps)
        .def("survival_at", &zacr::KaplanMeierCurve::survival_at, py::arg("t"));

    m.def("kaplan_meier", &zacr::kaplan_meier, py::arg("data"));

    py::class_<zacr::SurvivalTableRow>(m, "SurvivalTableRow")
        .def_readonly("time", &zacr::SurvivalTableRow::time)
        .def_readonly("survival", &zacr::SurvivalTableRow::survival);

    m.def("survival_table", &zacr::survival_table, py::arg("model"), py::arg("times"));
}
