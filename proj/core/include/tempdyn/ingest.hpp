#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tempdyn/series.hpp"

namespace tempdyn {

// Daily average temperature from the day's extremes.
// Throws validation_error if tmax < tmin.
double daily_average(double tmax, double tmin);

// Missing-propagating variant: absent input -> absent output.
std::optional<double> daily_average(std::optional<double> tmax, std::optional<double> tmin);

struct LoadOptions {
    // Station label recorded on the series; defaults to the file stem.
    std::string station_id;
};

// Reads a station CSV (`date,tmax,tmin` with an optional trailing `tavg`
// column) into a contiguous daily series. Dates must be strictly increasing;
// calendar gaps become explicit missing entries. A tavg field, when present,
// is taken verbatim so that load -> write -> load is a fixed point.
TemperatureSeries load_station_csv(const std::filesystem::path& path,
                                   const LoadOptions& options = {});

// Writes the series in the `date,tmax,tmin,tavg` schema (empty field =
// missing) using shortest round-trip number formatting.
void write_station_csv(const TemperatureSeries& series, const std::filesystem::path& path);

// Fills every missing day with the combined average
//   1/2 * (mean of the nearest `window_days` valued days on each side +
//          mean of the same calendar day over all prior years with a value),
// processing gaps in chronological order so earlier fills feed later ones.
// Feb 29 falls back to Feb 28 in non-leap prior years.
// Throws validation_error if more than 10% of the series is missing, or if a
// gap lacks enough neighbours or any prior-year value (the message names the
// day). Present values are returned bit-identical.
TemperatureSeries fill_missing(const TemperatureSeries& series, int window_days = 7);

struct DescriptiveStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    // Mode of the values rounded to 0.1 degC; ties resolve to the smallest.
    double mode = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1)
    double minimum = 0.0;
    double maximum = 0.0;
    double skewness = 0.0; // third standardized central moment
    double kurtosis = 0.0; // raw fourth standardized moment (normal = 3)
};

DescriptiveStats descriptive_stats(const std::vector<double>& values);
// Requires a complete series.
DescriptiveStats descriptive_stats(const TemperatureSeries& series);

} // namespace tempdyn
