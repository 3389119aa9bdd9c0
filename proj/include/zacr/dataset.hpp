#pragma once

#include <cstddef>
#include <vector>

namespace zacr {

struct Observation {
    double time = 0.0;
    bool event = true;  // false = right-censored
};

// Right-censored survival sample with a possible atom at zero. Zero times
// must be events: the atom is observed exactly, never censored.
class SurvivalDataset {
public:
    explicit SurvivalDataset(std::vector<Observation> obs);

    const std::vector<Observation>& observations() const { return obs_; }
    std::size_t size() const { return obs_.size(); }

    std::size_t zero_count() const { return n_zero_; }
    std::size_t event_count() const { return n_event_; }      // includes zeros
    std::size_t censored_count() const { return size() - n_event_; }

    double censored_fraction() const {
        return static_cast<double>(censored_count()) / static_cast<double>(size());
    }

private:
    std::vector<Observation> obs_;
    std::size_t n_zero_ = 0;
    std::size_t n_event_ = 0;
};

}  // namespace zacr
