#include "tempdyn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tempdyn/errors.hpp"

namespace tempdyn {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0)
        throw validation_error("nelder_mead: empty start point");

    NelderMeadResult out;
    const auto eval = [&](const std::vector<double>& x) {
        ++out.evaluations;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fval(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double step = opts.initial_step * std::max(1.0, std::fabs(x0[i]));
        simplex[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= n; ++i)
        fval[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fval[a] < fval[b]; });
        const std::size_t lo = order[0], hi = order[n], second_hi = order[n - 1];

        // Stopping: relative f-spread and simplex diameter both small.
        const double f_spread = std::fabs(fval[hi] - fval[lo]);
        double diameter = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diameter = std::max(diameter, std::fabs(simplex[hi][i] - simplex[lo][i]));
        if (f_spread <= opts.tol_f * (std::fabs(fval[lo]) + opts.tol_f) &&
            diameter <= opts.tol_x * (1.0 + std::fabs(simplex[lo][0]))) {
            out.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == hi)
                continue;
            for (std::size_t i = 0; i < n; ++i)
                centroid[i] += simplex[k][i];
        }
        for (std::size_t i = 0; i < n; ++i)
            centroid[i] /= double(n);

        for (std::size_t i = 0; i < n; ++i)
            xr[i] = centroid[i] + (centroid[i] - simplex[hi][i]);
        const double fr = eval(xr);

        if (fr < fval[lo]) {
            for (std::size_t i = 0; i < n; ++i)
                xe[i] = centroid[i] + 2.0 * (centroid[i] - simplex[hi][i]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[hi] = xe;
                fval[hi] = fe;
            } else {
                simplex[hi] = xr;
                fval[hi] = fr;
            }
        } else if (fr < fval[second_hi]) {
            simplex[hi] = xr;
            fval[hi] = fr;
        } else {
            // Contract toward the better of (worst, reflected).
            const bool outside = fr < fval[hi];
            const std::vector<double>& toward = outside ? xr : simplex[hi];
            for (std::size_t i = 0; i < n; ++i)
                xc[i] = centroid[i] + 0.5 * (toward[i] - centroid[i]);
            const double fc = eval(xc);
            if (fc < std::min(fr, fval[hi])) {
                simplex[hi] = xc;
                fval[hi] = fc;
            } else {
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == lo)
                        continue;
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[k][i] = simplex[lo][i] + 0.5 * (simplex[k][i] - simplex[lo][i]);
                    fval[k] = eval(simplex[k]);
                }
            }
        }
    }

    const std::size_t best =
        std::size_t(std::min_element(fval.begin(), fval.end()) - fval.begin());
    out.x = simplex[best];
    out.fx = fval[best];
    return out;
}

} // namespace tempdyn
