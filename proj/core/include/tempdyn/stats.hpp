#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tempdyn {

struct AlphaDecision {
    double alpha = 0.0;
    bool reject = false;
};

struct TestResult {
    std::string name;
    double statistic = 0.0;
    // Present for Kolmogorov-Smirnov: sqrt(n) * D, the form comparable across
    // sample sizes.
    std::optional<double> scaled_statistic;
    std::optional<double> p_value;
    std::vector<AlphaDecision> reject_at; // alpha = 0.01, 0.05, 0.10
    std::vector<std::string> notes;
};

// Pearson goodness-of-fit of `samples` against a normal distribution fitted
// by maximum likelihood, using `n_bins` equal-probability bins (adjacent bins
// are merged, and noted, if an expected count falls below 5). Degrees of
// freedom: bins - 3 (two fitted parameters). Requires n >= 8 * n_bins.
TestResult pearson_chi2_normal(const std::vector<double>& samples, int n_bins = 50);

// JB = n/6 (S^2 + (K-3)^2/4); p-value from chi-squared with 2 dof.
// Requires n >= 20.
TestResult jarque_bera(const std::vector<double>& samples);
double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis);

// D = sup |F_n - F|; also reports sqrt(n) D and its asymptotic p-value from
// the Kolmogorov distribution.
TestResult kolmogorov_smirnov(std::vector<double> samples,
                              const std::function<double(double)>& cdf);

// Survival function of the Kolmogorov distribution (the sqrt(n) D limit law).
double kolmogorov_sf(double t);

// A^2 = -n - (1/n) sum (2i-1) [ln F(x_(i)) + ln(1 - F(x_(n+1-i)))], with F
// clipped into [1e-12, 1 - 1e-12] (noted when it happens). The p-value uses
// the fully-specified-parameters asymptotic law (absolute error < 2e-4);
// when `parameters_fitted` is set the p-value is additionally flagged
// approximate.
TestResult anderson_darling(std::vector<double> samples,
                            const std::function<double(double)>& cdf,
                            bool parameters_fitted = false);

// The A^2 formula applied to probability values in the given order (position
// i is treated as the i-th order statistic). Exposed for property tests.
double anderson_darling_statistic(const std::vector<double>& probabilities);

// Lagrange-multiplier test for autoregressive conditional heteroskedasticity:
// regress squared residuals on `lags` of themselves plus an intercept;
// statistic = n' R^2 with n' regression rows, p-value from chi-squared with
// `lags` dof. A constant squared series has no explainable variance and
// yields statistic 0. Requires n > 10 * lags.
TestResult engle_arch(const std::vector<double>& residuals, int lags = 12);

// Quantile by linear interpolation between order statistics (h = (n-1) p,
// the convention spreadsheet and array libraries default to). `sorted` must
// be ascending and nonempty; p must lie in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

struct HurstResult {
    double exponent = 0.0;
    std::vector<std::size_t> window_sizes;   // the log-spaced grid used
    std::vector<double> rescaled_ranges;     // mean R/S at each grid size
};

// Rescaled-range estimate of the Hurst exponent over a geometric grid of
// window sizes from 32 to n/4. Requires n >= 256 and a non-constant series.
HurstResult hurst_rs(const std::vector<double>& series);

} // namespace tempdyn
