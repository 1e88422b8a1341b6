#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tempdyn {

// Cumulative temperature indices over a measurement window.
//   cat: plain sum of daily average temperatures.
//   gdd: sum of daily exceedances over a crop-specific optimal temperature.
enum class IndexKind { cat, gdd };

std::string index_kind_name(IndexKind kind);
IndexKind index_kind_from_name(const std::string& name); // throws validation_error

// Measurement window [tau1, tau2], both ends inclusive, as 0-based indices
// into the daily series. t_optimal is the growing-degree-day threshold; it
// has no sensible universal default, so it is required for gdd and must be
// absent for cat.
struct IndexSpec {
    IndexKind kind = IndexKind::cat;
    std::size_t tau1 = 0;
    std::size_t tau2 = 0;
    std::optional<double> t_optimal;
};

// Throws validation_error if the window is inverted or falls outside a
// series of `series_length` days, or if t_optimal presence does not match
// the kind.
void validate(const IndexSpec& spec, std::size_t series_length);

// Sum of temperatures over the inclusive window. Throws validation_error on
// an invalid window or a non-finite temperature inside it.
double cat_index(const std::vector<double>& series, std::size_t tau1, std::size_t tau2);

// Sum of max(T - t_optimal, 0) over the inclusive window.
double gdd_index(const std::vector<double>& series, std::size_t tau1, std::size_t tau2,
                 double t_optimal);

// Dispatch on spec.kind after validating the spec against the series.
double index_value(const std::vector<double>& series, const IndexSpec& spec);

// Equal-width histogram. edges has counts.size() + 1 entries; a sample with
// zero range degenerates to a single zero-width bin holding everything.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

struct IndexDistributionOptions {
    std::vector<double> quantile_levels = {0.01, 0.05, 0.10, 0.25, 0.50,
                                           0.75, 0.90, 0.95, 0.99};
    int histogram_bins = 30;
};

// Monte Carlo summary of an index across simulated paths.
struct IndexDistribution {
    std::vector<double> values; // per-path index values, in path order
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for a single path
    std::vector<double> quantile_levels;
    std::vector<double> quantiles; // linear interpolation between order stats
    Histogram histogram;
};

// Computes the index on every path (rows are temperature series of equal
// standing; ragged rows are fine as long as each covers the window) and
// reduces to summary statistics. Throws validation_error on an empty path
// set, a window any path cannot cover, duplicate/unsorted quantile levels,
// or a non-positive bin count.
IndexDistribution index_distribution(const std::vector<std::vector<double>>& temperature_paths,
                                     const IndexSpec& spec,
                                     const IndexDistributionOptions& options = {});

} // namespace tempdyn
