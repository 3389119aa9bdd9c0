#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace zacr {

// Step size for central differences at coordinate value x.
inline double fd_step(double x) {
    return std::max(1e-4 * std::abs(x), 1e-5);
}

// Central-difference gradient. f takes a const std::vector<double>&.
template <typename F>
std::vector<double> central_gradient(F&& f, std::vector<double> x) {
    const std::size_t k = x.size();
    std::vector<double> g(k);
    for (std::size_t j = 0; j < k; ++j) {
        double h = fd_step(x[j]);
        double xj = x[j];
        x[j] = xj + h;
        double fp = f(x);
        x[j] = xj - h;
        double fm = f(x);
        x[j] = xj;
        g[j] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Central-difference Hessian, symmetrized; row-major k x k.
template <typename F>
std::vector<double> central_hessian(F&& f, std::vector<double> x) {
    const std::size_t k = x.size();
    std::vector<double> H(k * k);
    std::vector<double> h(k);
    for (std::size_t j = 0; j < k; ++j) h[j] = fd_step(x[j]);

    const double f0 = f(x);
    for (std::size_t j = 0; j < k; ++j) {
        double xj = x[j];
        x[j] = xj + h[j];
        double fp = f(x);
        x[j] = xj - h[j];
        double fm = f(x);
        x[j] = xj;
        H[j * k + j] = (fp - 2.0 * f0 + fm) / (h[j] * h[j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = j + 1; l < k; ++l) {
            double xj = x[j], xl = x[l];
            x[j] = xj + h[j]; x[l] = xl + h[l];
            double fpp = f(x);
            x[l] = xl - h[l];
            double fpm = f(x);
            x[j] = xj - h[j]; x[l] = xl + h[l];
            double fmp = f(x);
            x[l] = xl - h[l];
            double fmm = f(x);
            x[j] = xj; x[l] = xl;
            double v = (fpp - fpm - fmp + fmm) / (4.0 * h[j] * h[l]);
            H[j * k + l] = v;
            H[l * k + j] = v;
        }
    }
    return H;
}

}  // namespace zacr
