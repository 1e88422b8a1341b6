#pragma once

#include <cstddef>
#include <vector>

#include "tempdyn/ghdist.hpp"

namespace tempdyn {

struct FitOptions {
    int starts = 8;               // moment-informed multi-start count
    int max_iterations = 1500;    // simplex iterations per start
    double tolerance = 1e-11;     // objective spread stopping threshold
};

struct FitResult {
    GHParams params;
    double loglik = 0.0;
    int iterations = 0;       // summed over all starts
    bool converged = false;   // stopping criterion met on the winning start
    int start_points_used = 0;
};

// Maximum-likelihood fit of one family to the samples via derivative-free
// simplex search over an unconstrained reparametrization (alpha = e^a,
// beta = alpha tanh(b), delta = e^d, and nu free / e^l where applicable),
// run from several moment-informed starting points; the best final point
// wins. The Normal family is fitted in closed form (mean and
// maximum-likelihood standard deviation).
// Requires n >= 50 non-constant samples. Throws numeric_error if every start
// fails to produce a finite likelihood.
FitResult fit_mle(const std::vector<double>& samples, GHFamily family,
                  const FitOptions& options = {});

// Sample log-likelihood of the parameters (sum of log_pdf); the quantity
// fit_mle maximizes.
double log_likelihood(const GHParams& params, const std::vector<double>& samples);

} // namespace tempdyn
