#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/oracles.hpp"
#include "zacr/errors.hpp"
#include "zacr/kaplan_meier.hpp"
#include "zacr/rng.hpp"
#include "zacr/simulate.hpp"

using zacr::CensoringKind;
using zacr::CensoringSpec;
using zacr::Observation;
using zacr::SurvivalDataset;
using zacr::ZacrModel;

namespace {

ZacrModel mixture_truth() {
    return ZacrModel::standard_mixture({2.0, 1.0}, 0.3, 0.1);
}

}  // namespace

TEST_CASE("every subject consumes exactly three uniforms") {
    ZacrModel m = mixture_truth();
    CensoringSpec cens = CensoringSpec::uniform(50.0);
    zacr::Rng a(314);
    (void)zacr::sample_observation(m, cens, a);
    double after_one = a.uniform();

    zacr::Rng b(314);
    b.uniform();
    b.uniform();
    b.uniform();
    CHECK(after_one == b.uniform());
}

TEST_CASE("a saturated atom yields only zero events") {
    ZacrModel m = ZacrModel::standard_mixture({2.0, 1.0}, 0.0, 1.0);
    SurvivalDataset d = zacr::sample_dataset(m, 200, CensoringSpec::none(), 9);
    CHECK(d.zero_count() == 200);
    CHECK(d.event_count() == 200);
}

TEST_CASE("sampling is deterministic in the seed") {
    ZacrModel m = mixture_truth();
    CensoringSpec cens = CensoringSpec::uniform(140.0);
    SurvivalDataset a = zacr::sample_dataset(m, 300, cens, 1234);
    SurvivalDataset b = zacr::sample_dataset(m, 300, cens, 1234);
    SurvivalDataset c = zacr::sample_dataset(m, 300, cens, 1235);
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < 300; ++i) {
        identical = identical && a.observations()[i].time == b.observations()[i].time &&
                    a.observations()[i].event == b.observations()[i].event;
        differs = differs || a.observations()[i].time != c.observations()[i].time;
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("marginal law without censoring matches the population survival") {
    // cureless, atomless: the sample is fully observed
    ZacrModel m = ZacrModel::standard_mixture({2.0, 1.0}, 0.0, 0.0);
    SurvivalDataset d = zacr::sample_dataset(m, 10000, CensoringSpec::none(), 4242);
    std::vector<double> t;
    for (const Observation& o : d.observations()) {
        CHECK(o.event);
        t.push_back(o.time);
    }
    std::sort(t.begin(), t.end());
    double sup = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double ecdf_surv = 1.0 - (i + 1.0) / t.size();
        sup = std::max(sup, std::abs(ecdf_surv - m.population_survival(t[i])));
    }
    CHECK(sup < 0.02);
}

TEST_CASE("marginal law under censoring matches via the product-limit curve") {
    ZacrModel m = ZacrModel::geometric({2.0, 1.0}, 12.0, 20.0);
    CensoringSpec cens = zacr::calibrate_censoring(m, CensoringKind::Uniform, 0.15);
    SurvivalDataset d = zacr::sample_dataset(m, 10000, cens, 31337);
    zacr::KaplanMeierCurve km = zacr::kaplan_meier(d);
    double sup = 0.0;
    for (const zacr::KaplanMeierStep& s : km.steps) {
        sup = std::max(sup, std::abs(s.survival - m.population_survival(s.time)));
    }
    CHECK(sup < 0.02);
}

TEST_CASE("empirical zero fraction sits inside its binomial band") {
    ZacrModel m = mixture_truth();
    SurvivalDataset d =
        zacr::sample_dataset(m, 20000, CensoringSpec::uniform(140.0), 8675309);
    double phat = static_cast<double>(d.zero_count()) / 20000.0;
    double band = 2.5758293035489008 * std::sqrt(0.1 * 0.9 / 20000.0);
    CHECK(std::abs(phat - 0.1) < band);
}

TEST_CASE("expected censoring rate composes cure mass and an integral") {
    ZacrModel m = mixture_truth();
    SUBCASE("uniform") {
        CensoringSpec cens = CensoringSpec::uniform(100.0);
        double integral = oracles::integrate(
            [&](double t) { return m.proper_survival(t); }, 0.0, 100.0, 1e-12);
        double expected = m.cure_fraction() + m.event_weight() * integral / 100.0;
        CHECK(std::abs(zacr::expected_censoring_rate(m, cens) - expected) < 1e-8);
    }
    SUBCASE("exponential") {
        CensoringSpec cens = CensoringSpec::exponential(0.05);
        double integral = oracles::integrate(
            [&](double t) { return 0.05 * std::exp(-0.05 * t) * m.proper_survival(t); }, 0.0,
            2000.0, 1e-13);
        double expected = m.cure_fraction() + m.event_weight() * integral;
        CHECK(std::abs(zacr::expected_censoring_rate(m, cens) - expected) < 1e-8);
    }
    SUBCASE("none") {
        ZacrModel cureless = ZacrModel::standard_mixture({2.0, 1.0}, 0.0, 0.1);
        CHECK(zacr::expected_censoring_rate(cureless, CensoringSpec::none()) == 0.0);
        CHECK_THROWS_AS(zacr::expected_censoring_rate(m, CensoringSpec::none()),
                        std::invalid_argument);
    }
}

TEST_CASE("calibration hits the requested rate for both censoring laws") {
    ZacrModel m = mixture_truth();
    for (CensoringKind kind : {CensoringKind::Uniform, CensoringKind::Exponential}) {
        CensoringSpec cens = zacr::calibrate_censoring(m, kind, 0.351);
        CHECK(std::abs(zacr::expected_censoring_rate(m, cens) - 0.351) < 1e-6);
    }
    // reachable rates are (cure, 1 - zero)
    CHECK_THROWS_AS(zacr::calibrate_censoring(m, CensoringKind::Uniform, 0.25),
                    zacr::NumericalError);
    CHECK_THROWS_AS(zacr::calibrate_censoring(m, CensoringKind::Uniform, 0.95),
                    zacr::NumericalError);
    CHECK_THROWS_AS(zacr::calibrate_censoring(m, CensoringKind::None, 0.3),
                    std::invalid_argument);
}

TEST_CASE("realized censoring concentrates around the calibrated target") {
    ZacrModel m = mixture_truth();
    CensoringSpec cens = zacr::calibrate_censoring(m, CensoringKind::Uniform, 0.351);
    double total = 0.0;
    for (int r = 0; r < 100; ++r) {
        SurvivalDataset d = zacr::sample_dataset(m, 500, cens, zacr::derive_seed(555, r));
        total += d.censored_fraction();
    }
    CHECK(std::abs(total / 100.0 - 0.351) < 0.01);
}

TEST_CASE("cure without a censoring law cannot be sampled") {
    CHECK_THROWS_AS(zacr::sample_dataset(mixture_truth(), 10, CensoringSpec::none(), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(CensoringSpec::uniform(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CensoringSpec::exponential(-1.0), std::invalid_argument);
}

TEST_CASE("study harness with an identity fitter reports zero error") {
    ZacrModel truth = mixture_truth();
    zacr::MonteCarloConfig cfg;
    cfg.n_threads = 1;
    auto oracle_fitter = [&](zacr::ZacrVariant v, const SurvivalDataset&,
                             const zacr::FitConfig&) {
        zacr::FitResult f;
        f.variant = v;
        f.parameter_names = zacr::parameter_names(v);
        f.estimates = zacr::parameters_of(truth);
        f.std_errors = {1.0, 1.0, 1.0, 1.0};
        f.covariance.assign(16, 0.0);
        f.converged = true;
        f.information_pd = true;
        f.grad_max_norm = 0.0;
        return f;
    };
    zacr::MonteCarloReport rep = zacr::monte_carlo_study(
        truth, 50, 3, CensoringSpec::uniform(140.0), 2024, cfg, oracle_fitter);
    CHECK(rep.n_converged == 3);
    CHECK_FALSE(rep.convergence_warning);
    for (const zacr::MonteCarloRow& row : rep.rows) {
        CHECK(row.bias == 0.0);
        CHECK(row.rmse == 0.0);
        CHECK(row.cp == 1.0);
    }
}

TEST_CASE("non-converged replications are excluded and flagged") {
    ZacrModel truth = mixture_truth();
    zacr::MonteCarloConfig cfg;
    cfg.n_threads = 1;
    int calls = 0;
    auto flaky = [&](zacr::ZacrVariant v, const SurvivalDataset&, const zacr::FitConfig&) {
        zacr::FitResult f;
        f.variant = v;
        f.parameter_names = zacr::parameter_names(v);
        f.estimates = zacr::parameters_of(truth);
        f.std_errors = {1.0, 1.0, 1.0, 1.0};
        f.converged = (calls++ % 2) == 0;
        f.information_pd = f.converged;
        return f;
    };
    zacr::MonteCarloReport rep = zacr::monte_carlo_study(
        truth, 20, 10, CensoringSpec::uniform(140.0), 7, cfg, flaky);
    CHECK(rep.n_converged == 5);
    CHECK(rep.convergence_warning);
}

TEST_CASE("study results are identical across thread counts and repeat runs") {
    ZacrModel truth = mixture_truth();
    CensoringSpec cens = CensoringSpec::uniform(140.0);
    zacr::MonteCarloConfig one;
    one.n_threads = 1;
    zacr::MonteCarloConfig four;
    four.n_threads = 4;
    zacr::MonteCarloReport a = zacr::monte_carlo_study(truth, 100, 8, cens, 99, one);
    zacr::MonteCarloReport b = zacr::monte_carlo_study(truth, 100, 8, cens, 99, four);
    zacr::MonteCarloReport c = zacr::monte_carlo_study(truth, 100, 8, cens, 99, one);
    for (std::size_t j = 0; j < a.rows.size(); ++j) {
        CHECK(a.rows[j].bias == b.rows[j].bias);
        CHECK(a.rows[j].rmse == b.rows[j].rmse);
        CHECK(a.rows[j].cp == b.rows[j].cp);
        CHECK(a.rows[j].bias == c.rows[j].bias);
    }
    CHECK(a.mean_censoring_rate == b.mean_censoring_rate);
}

TEST_CASE("a real study behaves statistically") {
    ZacrModel truth = mixture_truth();
    CensoringSpec cens = zacr::calibrate_censoring(truth, CensoringKind::Uniform, 0.351);
    zacr::MonteCarloReport rep = zacr::monte_carlo_study(truth, 150, 40, cens, 20240816, {});
    CHECK(rep.n_converged >= 36);
    for (const zacr::MonteCarloRow& row : rep.rows) {
        CHECK(row.rmse >= std::abs(row.bias));
        CHECK(row.cp >= 0.0);
        CHECK(row.cp <= 1.0);
    }
    CHECK(std::abs(rep.mean_censoring_rate - 0.351) < 0.05);
}

TEST_CASE("errors and coverage tighten as the sample grows") {
    ZacrModel truth = mixture_truth();
    CensoringSpec cens = zacr::calibrate_censoring(truth, CensoringKind::Uniform, 0.351);
    std::vector<zacr::MonteCarloReport> reports;
    for (std::size_t n : {60, 240, 960}) {
        reports.push_back(zacr::monte_carlo_study(truth, n, 40, cens, 1848, {}));
    }
    // nonincreasing within Monte Carlo slack (B = 40 per point)
    for (std::size_t stage = 1; stage < reports.size(); ++stage) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(reports[stage].rows[j].rmse <= reports[stage - 1].rows[j].rmse * 1.45);
            CHECK(std::abs(reports[stage].rows[j].bias) <=
                  std::abs(reports[stage - 1].rows[j].bias) +
                      2.0 * reports[stage - 1].rows[j].rmse / std::sqrt(40.0));
        }
    }
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::abs(reports.back().rows[j].cp - 0.95) < 0.12);
    }
}

TEST_CASE("study argument validation") {
    ZacrModel truth = mixture_truth();
    CHECK_THROWS_AS(
        zacr::monte_carlo_study(truth, 100, 0, CensoringSpec::uniform(10.0), 1, {}),
        std::invalid_argument);
    zacr::MonteCarloConfig bad;
    bad.ci_level = 1.5;
    CHECK_THROWS_AS(
        zacr::monte_carlo_study(truth, 100, 2, CensoringSpec::uniform(10.0), 1, bad),
        std::invalid_argument);
    CHECK_THROWS_AS(zacr::sample_dataset(truth, 0, CensoringSpec::uniform(10.0), 1),
                    std::invalid_argument);
}
