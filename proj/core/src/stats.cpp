#include "tempdyn/stats.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "tempdyn/errors.hpp"
#include "tempdyn/special.hpp"

namespace tempdyn {

namespace {

constexpr double pi = 3.14159265358979323846;

void attach_decisions(TestResult& r) {
    if (!r.p_value)
        return;
    for (double alpha : {0.01, 0.05, 0.10})
        r.reject_at.push_back({alpha, *r.p_value < alpha});
}

struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

Moments central_moments(const std::vector<double>& xs) {
    Moments m;
    const double n = double(xs.size());
    for (double x : xs)
        m.mean += x;
    m.mean /= n;
    for (double x : xs) {
        const double c = x - m.mean;
        m.m2 += c * c;
        m.m3 += c * c * c;
        m.m4 += c * c * c * c;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

} // namespace

TestResult pearson_chi2_normal(const std::vector<double>& samples, int n_bins) {
    const std::size_t n = samples.size();
    if (n_bins < 4)
        throw validation_error("pearson_chi2_normal: need at least 4 bins");
    if (n < std::size_t(8) * std::size_t(n_bins))
        throw validation_error("pearson_chi2_normal: need at least 8 samples per bin, got " +
                               std::to_string(n) + " for " + std::to_string(n_bins) + " bins");

    const Moments m = central_moments(samples);
    if (m.m2 <= 0.0)
        throw validation_error("pearson_chi2_normal: zero-variance sample");
    const double mu = m.mean;
    const double sigma = std::sqrt(m.m2); // maximum-likelihood scale

    // Equal-probability bin edges under the fitted normal.
    std::vector<double> edges(std::size_t(n_bins) - 1);
    for (int k = 1; k < n_bins; ++k)
        edges[std::size_t(k) - 1] = mu + sigma * norm_quantile(double(k) / double(n_bins));

    std::vector<double> observed(std::size_t(n_bins), 0.0);
    for (double x : samples) {
        const std::size_t bin =
            std::size_t(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
        observed[bin] += 1.0;
    }
    std::vector<double> expected(std::size_t(n_bins), double(n) / double(n_bins));

    TestResult r;
    r.name = "pearson_chi2";

    // Merge adjacent bins until every expected count is at least 5. With
    // equal-probability bins and the precondition above this does not fire,
    // but callers may fold other expected layouts through here one day.
    bool merged = false;
    for (std::size_t i = 0; i + 1 < expected.size();) {
        if (expected[i] < 5.0) {
            expected[i + 1] += expected[i];
            observed[i + 1] += observed[i];
            expected.erase(expected.begin() + std::ptrdiff_t(i));
            observed.erase(observed.begin() + std::ptrdiff_t(i));
            merged = true;
        } else {
            ++i;
        }
    }
    if (expected.size() > 1 && expected.back() < 5.0) {
        expected[expected.size() - 2] += expected.back();
        observed[observed.size() - 2] += observed.back();
        expected.pop_back();
        observed.pop_back();
        merged = true;
    }
    if (merged)
        r.notes.push_back("bins merged to keep expected counts >= 5; " +
                          std::to_string(expected.size()) + " bins used");
    if (expected.size() < 4)
        throw validation_error("pearson_chi2_normal: fewer than 4 bins after merging");

    double stat = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    r.statistic = stat;
    r.p_value = chi_squared_sf(stat, double(expected.size()) - 3.0);
    attach_decisions(r);
    return r;
}

double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis) {
    const double excess = kurtosis - 3.0;
    return double(n) / 6.0 * (skewness * skewness + excess * excess / 4.0);
}

TestResult jarque_bera(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 20)
        throw validation_error("jarque_bera: need at least 20 samples, got " + std::to_string(n));
    const Moments m = central_moments(samples);
    if (m.m2 <= 0.0)
        throw validation_error("jarque_bera: zero-variance sample");
    const double s = m.m3 / std::pow(m.m2, 1.5);
    const double k = m.m4 / (m.m2 * m.m2);

    TestResult r;
    r.name = "jarque_bera";
    r.statistic = jarque_bera_statistic(n, s, k);
    r.p_value = chi_squared_sf(r.statistic, 2.0);
    attach_decisions(r);
    return r;
}

double kolmogorov_sf(double t) {
    if (!(t > 0.0))
        return 1.0;
    if (t < 1.18) {
        // Dual theta series: fast for small t where the direct series is slow.
        const double a = pi * pi / (8.0 * t * t);
        double cdf = 0.0;
        for (int k = 1; k < 40; k += 2) {
            const double term = std::exp(-double(k) * double(k) * a);
            cdf += term;
            if (term < 1e-18 * cdf)
                break;
        }
        cdf *= std::sqrt(2.0 * pi) / t;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double term = std::exp(-2.0 * double(k) * double(k) * t * t);
        q += 2.0 * sign * term;
        sign = -sign;
        if (term < 1e-18)
            break;
    }
    return std::clamp(q, 0.0, 1.0);
}

TestResult kolmogorov_smirnov(std::vector<double> samples,
                              const std::function<double(double)>& cdf) {
    const std::size_t n = samples.size();
    if (n == 0)
        throw validation_error("kolmogorov_smirnov: empty sample");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, f - double(i) / double(n));
        d = std::max(d, double(i + 1) / double(n) - f);
    }
    TestResult r;
    r.name = "kolmogorov_smirnov";
    r.statistic = d;
    r.scaled_statistic = std::sqrt(double(n)) * d;
    r.p_value = kolmogorov_sf(*r.scaled_statistic);
    r.notes.push_back("p-value is the asymptotic Kolmogorov law of sqrt(n) D");
    attach_decisions(r);
    return r;
}

double anderson_darling_statistic(const std::vector<double>& probabilities) {
    const std::size_t n = probabilities.size();
    if (n == 0)
        throw validation_error("anderson_darling_statistic: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double weight = 2.0 * double(i + 1) - 1.0;
        sum += weight * (std::log(probabilities[i]) + std::log1p(-probabilities[n - 1 - i]));
    }
    return -double(n) - sum / double(n);
}

namespace {

// P(A^2 < z) in the fully-specified case, short Marsaglia form; absolute
// error below 2e-4, adequate for the decision levels used here.
double ad_cdf_case0(double z) {
    if (z <= 0.0)
        return 0.0;
    if (z < 2.0)
        return std::exp(-1.2337141 / z) / std::sqrt(z) *
               (2.00012 +
                (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) *
                    z);
    return std::exp(
        -std::exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) *
                                          z) *
                               z));
}

} // namespace

TestResult anderson_darling(std::vector<double> samples,
                            const std::function<double(double)>& cdf, bool parameters_fitted) {
    const std::size_t n = samples.size();
    if (n == 0)
        throw validation_error("anderson_darling: empty sample");
    std::sort(samples.begin(), samples.end());

    constexpr double clip = 1e-12;
    bool clipped = false;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(samples[i]);
        if (f < clip || f > 1.0 - clip) {
            f = std::clamp(f, clip, 1.0 - clip);
            clipped = true;
        }
        u[i] = f;
    }

    TestResult r;
    r.name = "anderson_darling";
    r.statistic = anderson_darling_statistic(u);
    r.p_value = std::clamp(1.0 - ad_cdf_case0(r.statistic), 0.0, 1.0);
    if (clipped)
        r.notes.push_back("cdf values clipped away from 0/1 at some samples");
    if (parameters_fitted)
        r.notes.push_back(
            "parameters were fitted from the data; fully-specified p-value is approximate");
    attach_decisions(r);
    return r;
}

TestResult engle_arch(const std::vector<double>& residuals, int lags) {
    const std::size_t n = residuals.size();
    if (lags < 1)
        throw validation_error("engle_arch: lags must be >= 1");
    if (n <= std::size_t(10) * std::size_t(lags))
        throw validation_error("engle_arch: need more than " + std::to_string(10 * lags) +
                               " residuals for " + std::to_string(lags) + " lags, got " +
                               std::to_string(n));

    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = residuals[i] * residuals[i];

    const std::size_t rows = n - std::size_t(lags);
    const std::size_t cols = std::size_t(lags) + 1;
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (std::size_t t = 0; t < rows; ++t) {
        y(Eigen::Index(t)) = sq[t + std::size_t(lags)];
        x(Eigen::Index(t), 0) = 1.0;
        for (int l = 1; l <= lags; ++l)
            x(Eigen::Index(t), l) = sq[t + std::size_t(lags) - std::size_t(l)];
    }

    const double y_mean = y.mean();
    const double sst = (y.array() - y_mean).square().sum();

    TestResult r;
    r.name = "engle_arch";
    if (sst <= 1e-14 * double(rows) * std::max(1.0, y_mean * y_mean)) {
        // Constant squared residuals: nothing for the lags to explain.
        r.statistic = 0.0;
        r.p_value = 1.0;
        r.notes.push_back("squared residuals are constant; statistic forced to 0");
        attach_decisions(r);
        return r;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < Eigen::Index(cols))
        throw numeric_error("engle_arch: lag regression is singular");
    const Eigen::VectorXd beta = qr.solve(y);
    const double ssr = (y - x * beta).squaredNorm();
    const double r2 = std::clamp(1.0 - ssr / sst, 0.0, 1.0);

    r.statistic = double(rows) * r2;
    r.p_value = chi_squared_sf(r.statistic, double(lags));
    attach_decisions(r);
    return r;
}

HurstResult hurst_rs(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 256)
        throw validation_error("hurst_rs: need at least 256 observations, got " +
                               std::to_string(n));
    if (std::all_of(series.begin(), series.end(),
                    [&](double v) { return v == series.front(); }))
        throw validation_error("hurst_rs: constant series has no rescaled range");

    // Geometric grid of window sizes, about 14 points from 32 to n/4.
    const std::size_t min_size = 32;
    const std::size_t max_size = n / 4;
    const int grid_points = 14;
    std::vector<std::size_t> sizes;
    const double ratio = std::pow(double(max_size) / double(min_size),
                                  1.0 / double(grid_points - 1));
    for (int k = 0; k < grid_points; ++k) {
        const auto s = std::size_t(std::llround(double(min_size) * std::pow(ratio, k)));
        if (sizes.empty() || s > sizes.back())
            sizes.push_back(s);
    }

    HurstResult result;
    for (std::size_t s : sizes) {
        const std::size_t windows = n / s;
        double rs_sum = 0.0;
        std::size_t rs_count = 0;
        for (std::size_t w = 0; w < windows; ++w) {
            const double* seg = series.data() + w * s;
            double mean = 0.0;
            for (std::size_t i = 0; i < s; ++i)
                mean += seg[i];
            mean /= double(s);
            double var = 0.0, cum = 0.0, lo = 0.0, hi = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                const double c = seg[i] - mean;
                var += c * c;
                cum += c;
                lo = std::min(lo, cum);
                hi = std::max(hi, cum);
            }
            const double sd = std::sqrt(var / double(s));
            if (sd > 0.0) {
                rs_sum += (hi - lo) / sd;
                ++rs_count;
            }
        }
        if (rs_count > 0) {
            result.window_sizes.push_back(s);
            result.rescaled_ranges.push_back(rs_sum / double(rs_count));
        }
    }

    if (result.window_sizes.size() < 2)
        throw validation_error("hurst_rs: too few usable window sizes");

    // OLS slope of log(R/S) against log(window size).
    const std::size_t k = result.window_sizes.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double lx = std::log(double(result.window_sizes[i]));
        const double ly = std::log(result.rescaled_ranges[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    result.exponent = (double(k) * sxy - sx * sy) / (double(k) * sxx - sx * sx);
    return result;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty())
        throw validation_error("quantile_sorted: empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw validation_error("quantile_sorted: level " + std::to_string(p) +
                               " outside [0, 1]");
    const std::size_t n = sorted.size();
    if (n == 1)
        return sorted.front();
    const double h = double(n - 1) * p;
    const std::size_t lo = std::size_t(h) < n - 1 ? std::size_t(h) : n - 2;
    const double frac = h - double(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace tempdyn
