#include "zacr/dataset.hpp"

#include <cmath>
#include <string>

#include "zacr/errors.hpp"

namespace zacr {

SurvivalDataset::SurvivalDataset(std::vector<Observation> obs) : obs_(std::move(obs)) {
    if (obs_.empty()) {
        throw DataError("dataset: at least one observation is required");
    }
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        const Observation& o = obs_[i];
        if (!std::isfinite(o.time) || o.time < 0.0) {
            throw DataError("dataset: observation " + std::to_string(i) +
                            " has a negative or non-finite time");
        }
        if (o.time == 0.0) {
            if (!o.event) {
                throw DataError("dataset: observation " + std::to_string(i) +
                                " is censored at time zero; zero times must be events");
            }
            ++n_zero_;
        }
        if (o.event) ++n_event_;
    }
}

}  // namespace zacr
