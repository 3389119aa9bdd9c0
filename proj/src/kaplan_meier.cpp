#include "zacr/kaplan_meier.hpp"

#include <algorithm>
#include <stdexcept>

namespace zacr {

double KaplanMeierCurve::survival_at(double t) const {
    if (steps.empty()) throw std::logic_error("kaplan_meier: empty curve");
    if (t < steps.front().time) return 1.0;
    std::size_t lo = 0, hi = steps.size();
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (steps[mid].time <= t) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return steps[lo].survival;
}

KaplanMeierCurve kaplan_meier(const SurvivalDataset& data) {
    std::vector<Observation> obs = data.observations();
    std::stable_sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.event && !b.event;  // events first within a tie
    });

    KaplanMeierCurve curve;
    double surv = 1.0;
    std::size_t remaining = obs.size();
    std::size_t i = 0;
    bool step_at_zero = false;
    while (i < obs.size()) {
        double t = obs[i].time;
        std::size_t d = 0, c = 0;
        while (i < obs.size() && obs[i].time == t) {
            if (obs[i].event) {
                ++d;
            } else {
                ++c;
            }
            ++i;
        }
        if (d > 0) {
            surv *= 1.0 - static_cast<double>(d) / static_cast<double>(remaining);
            curve.steps.push_back({t, surv, remaining, d});
            if (t == 0.0) step_at_zero = true;
        }
        remaining -= d + c;
    }
    if (!step_at_zero) {
        curve.steps.insert(curve.steps.begin(), {0.0, 1.0, obs.size(), 0});
    }
    return curve;
}

}  // namespace zacr
