#pragma once

#include <functional>
#include <vector>

namespace zacr {

struct NelderMeadOptions {
    int max_iterations = 2000;
    double f_tol = 1e-9;   // spread of simplex values
    double x_tol = 1e-6;   // simplex diameter
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free simplex minimizer (reflection 1, expansion 2,
// contraction 0.5, shrink 0.5). The objective may return +inf to mark
// infeasible points. Fully deterministic for a given start.
NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opt = {});

}  // namespace zacr
