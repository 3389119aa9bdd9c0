#pragma once

#include <cstddef>
#include <vector>

#include "zacr/dataset.hpp"

namespace zacr {

struct KaplanMeierStep {
    double time = 0.0;
    double survival = 1.0;
    std::size_t at_risk = 0;
    std::size_t events = 0;
};

struct KaplanMeierCurve {
    std::vector<KaplanMeierStep> steps;  // always starts with a row at time 0

    // right-continuous step lookup
    double survival_at(double t) const;
};

// Product-limit estimator. Ties are grouped; at a tied time the events are
// processed before the censorings (censored subjects stay in the risk set for
// that time's factor). Events at time 0 drop the curve immediately.
KaplanMeierCurve kaplan_meier(const SurvivalDataset& data);

}  // namespace zacr
