#include "tempdyn/indices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tempdyn/errors.hpp"
#include "tempdyn/stats.hpp"

namespace tempdyn {

namespace {

void check_window(const std::vector<double>& series, std::size_t tau1, std::size_t tau2) {
    if (tau1 > tau2)
        throw validation_error("index window is inverted: tau1 " + std::to_string(tau1) +
                               " > tau2 " + std::to_string(tau2));
    if (tau2 >= series.size())
        throw validation_error("index window end " + std::to_string(tau2) +
                               " falls outside a series of " + std::to_string(series.size()) +
                               " days");
    for (std::size_t t = tau1; t <= tau2; ++t)
        if (!std::isfinite(series[t]))
            throw validation_error("non-finite temperature at day index " + std::to_string(t) +
                                   " inside the index window");
}

} // namespace

std::string index_kind_name(IndexKind kind) {
    return kind == IndexKind::cat ? "cat" : "gdd";
}

IndexKind index_kind_from_name(const std::string& name) {
    if (name == "cat")
        return IndexKind::cat;
    if (name == "gdd")
        return IndexKind::gdd;
    throw validation_error("unknown index kind '" + name + "' (expected cat or gdd)");
}

void validate(const IndexSpec& spec, std::size_t series_length) {
    if (spec.tau1 > spec.tau2)
        throw validation_error("index window is inverted: tau1 " + std::to_string(spec.tau1) +
                               " > tau2 " + std::to_string(spec.tau2));
    if (spec.tau2 >= series_length)
        throw validation_error("index window end " + std::to_string(spec.tau2) +
                               " falls outside a series of " + std::to_string(series_length) +
                               " days");
    if (spec.kind == IndexKind::gdd) {
        if (!spec.t_optimal)
            throw validation_error("gdd index requires t_optimal");
        if (!std::isfinite(*spec.t_optimal))
            throw validation_error("gdd t_optimal must be finite");
    } else if (spec.t_optimal) {
        throw validation_error("t_optimal is only meaningful for the gdd index");
    }
}

double cat_index(const std::vector<double>& series, std::size_t tau1, std::size_t tau2) {
    check_window(series, tau1, tau2);
    double total = 0.0;
    for (std::size_t t = tau1; t <= tau2; ++t)
        total += series[t];
    return total;
}

double gdd_index(const std::vector<double>& series, std::size_t tau1, std::size_t tau2,
                 double t_optimal) {
    if (!std::isfinite(t_optimal))
        throw validation_error("gdd t_optimal must be finite");
    check_window(series, tau1, tau2);
    double total = 0.0;
    for (std::size_t t = tau1; t <= tau2; ++t)
        total += std::max(series[t] - t_optimal, 0.0);
    return total;
}

double index_value(const std::vector<double>& series, const IndexSpec& spec) {
    validate(spec, series.size());
    if (spec.kind == IndexKind::cat)
        return cat_index(series, spec.tau1, spec.tau2);
    return gdd_index(series, spec.tau1, spec.tau2, *spec.t_optimal);
}

IndexDistribution index_distribution(const std::vector<std::vector<double>>& temperature_paths,
                                     const IndexSpec& spec,
                                     const IndexDistributionOptions& options) {
    if (temperature_paths.empty())
        throw validation_error("index_distribution: no paths");
    if (options.histogram_bins < 1)
        throw validation_error("index_distribution: histogram_bins must be at least 1");
    for (std::size_t i = 0; i < options.quantile_levels.size(); ++i) {
        const double p = options.quantile_levels[i];
        if (!(p >= 0.0 && p <= 1.0))
            throw validation_error("index_distribution: quantile level " + std::to_string(p) +
                                   " outside [0, 1]");
        if (i > 0 && !(options.quantile_levels[i - 1] < p))
            throw validation_error("index_distribution: quantile levels must be strictly "
                                   "increasing");
    }

    IndexDistribution out;
    out.values.reserve(temperature_paths.size());
    for (const auto& path : temperature_paths)
        out.values.push_back(index_value(path, spec));

    const std::size_t n = out.values.size();
    double sum = 0.0;
    for (double v : out.values)
        sum += v;
    out.mean = sum / double(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : out.values)
            ss += (v - out.mean) * (v - out.mean);
        out.stddev = std::sqrt(ss / double(n - 1));
    }

    std::vector<double> sorted = out.values;
    std::sort(sorted.begin(), sorted.end());
    out.quantile_levels = options.quantile_levels;
    out.quantiles.reserve(out.quantile_levels.size());
    for (double p : out.quantile_levels)
        out.quantiles.push_back(quantile_sorted(sorted, p));

    const double lo = sorted.front();
    const double hi = sorted.back();
    if (lo == hi) {
        out.histogram.edges = {lo, hi};
        out.histogram.counts = {n};
    } else {
        const int bins = options.histogram_bins;
        const double width = (hi - lo) / double(bins);
        out.histogram.edges.reserve(std::size_t(bins) + 1);
        for (int b = 0; b <= bins; ++b)
            out.histogram.edges.push_back(b == bins ? hi : lo + width * double(b));
        out.histogram.counts.assign(std::size_t(bins), 0);
        for (double v : sorted) {
            auto idx = std::size_t((v - lo) / width);
            if (idx >= std::size_t(bins))
                idx = std::size_t(bins) - 1; // v == hi lands in the last bin
            ++out.histogram.counts[idx];
        }
    }
    return out;
}

} // namespace tempdyn
