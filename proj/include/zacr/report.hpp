#pragma once

#include <string>
#include <vector>

#include "zacr/inference.hpp"
#include "zacr/model.hpp"

namespace zacr {

struct SurvivalTableRow {
    double time = 0.0;
    double survival = 0.0;
};

// Population survival evaluated on a nonnegative, nondecreasing time grid.
std::vector<SurvivalTableRow> survival_table(const ZacrModel& m,
                                             const std::vector<double>& times);

// Variant names ordered by ascending AIC.
std::vector<std::string> aic_ranking(const std::vector<FitResult>& fits);

std::string format_fit_text(const FitResult& fit, double ci_level);
std::string format_comparison_text(const std::vector<FitResult>& fits);
std::string format_survival_table_text(const std::vector<SurvivalTableRow>& rows);

}  // namespace zacr
