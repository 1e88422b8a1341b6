#pragma once

#include <functional>
#include <vector>

namespace tempdyn {

struct NelderMeadOptions {
    double initial_step = 0.25;  // per-coordinate simplex offset
    double tol_f = 1e-11;        // relative spread of f over the simplex
    double tol_x = 1e-9;         // simplex diameter
    int max_iterations = 4000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

// Derivative-free simplex minimization (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2). converged = true means the simplex collapsed
// below the stopping thresholds, not that a stationarity certificate exists.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

} // namespace tempdyn
