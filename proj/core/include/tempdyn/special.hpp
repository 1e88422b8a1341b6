#pragma once

namespace tempdyn {

// Modified Bessel function of the second kind for real order.
struct BesselK {
    double value;     // K_nu(x); 0 when underflowed
    double scaled;    // e^x * K_nu(x), safe for large x
    double log_value; // log K_nu(x), finite whenever K_nu(x) > 0 mathematically
    bool underflow;   // K_nu(x) smaller than the smallest normal double
};

// Temme series for x <= 2, Steed continued fraction for x > 2, upward
// recurrence in the order. Relative accuracy is ~1e-13 for |nu| <= 50,
// x >= 1e-6 (K is symmetric in nu). Throws validation_error for x <= 0.
BesselK bessel_k_full(double nu, double x);

double bessel_k(double nu, double x);        // K_nu(x)
double bessel_k_scaled(double nu, double x); // e^x K_nu(x)
double log_bessel_k(double nu, double x);    // log K_nu(x)

// Regularized incomplete gamma functions, P(a,x) + Q(a,x) = 1.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-squared distribution with df degrees of freedom.
double chi_squared_sf(double x, double df);

// Standard normal density, distribution and quantile.
double norm_pdf(double z);
double norm_cdf(double z);
double norm_quantile(double p); // p in (0,1); accurate to ~1e-15 after refinement

} // namespace tempdyn
