#pragma once

#include <functional>

namespace tempdyn {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b]
// (a < b, both finite). The worst subinterval is bisected until the summed
// error estimate meets max(abs_tol, rel_tol * |integral|) or the evaluation
// budget runs out (converged = false in that case).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12, double rel_tol = 1e-10,
                           int max_evaluations = 500000);

// Same, but throws numeric_error when the tolerance was not reached.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, double rel_tol = 1e-10,
                          int max_evaluations = 500000);

} // namespace tempdyn
