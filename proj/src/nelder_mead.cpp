#include "zacr/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace zacr {

namespace {

double diameter(const std::vector<std::vector<double>>& pts, std::size_t best) {
    double d = 0.0;
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            d = std::max(d, std::abs(p[i] - pts[best][i]));
        }
    }
    return d;
}

}  // namespace

NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i + 1][i] += std::max(0.1, 0.15 * std::abs(x0[i]));
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(x[i]);

    std::vector<std::size_t> order(n + 1);
    NelderMeadResult res;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::size_t best = order[0], worst = order[n], second = order[n - 1];

        if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= opt.f_tol &&
            diameter(x, best) <= opt.x_tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += x[i][j];
        }
        for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

        auto point = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + coef * (x[worst][j] - centroid[j]);
            }
            return p;
        };

        std::vector<double> xr = point(-1.0);
        double fr = f(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = point(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                x[worst] = std::move(xe); fv[worst] = fe;
            } else {
                x[worst] = std::move(xr); fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            x[worst] = std::move(xr); fv[worst] = fr;
            continue;
        }
        bool outside = fr < fv[worst];
        std::vector<double> xc = point(outside ? -0.5 : 0.5);
        double fc = f(xc);
        if (fc < std::min(fr, fv[worst])) {
            x[worst] = std::move(xc); fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {  // shrink toward the best vertex
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) {
                x[i][j] = x[best][j] + 0.5 * (x[i][j] - x[best][j]);
            }
            fv[i] = f(x[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fv[i] < fv[best]) best = i;
    }
    res.x = x[best];
    res.f = fv[best];
    res.iterations = it;
    return res;
}

}  // namespace zacr
