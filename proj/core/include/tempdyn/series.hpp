#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tempdyn/dates.hpp"
#include "tempdyn/errors.hpp"

namespace tempdyn {

// One raw input row: daily max / min temperature in degrees C, either may be
// absent. A present tavg (from a previously serialized file) is kept so that
// load -> serialize -> load is a fixed point.
struct RawRecord {
    civil_date date;
    std::optional<double> tmax;
    std::optional<double> tmin;
    std::optional<double> tavg;
};

// Contiguous daily series. values[i] is the daily average temperature for
// start_date + i days; missing entries are explicit.
struct TemperatureSeries {
    std::string station_id;
    civil_date start_date{};
    std::vector<std::optional<double>> values;
    // Raw bounds kept for serialization; entries may be absent.
    std::vector<std::optional<double>> tmax;
    std::vector<std::optional<double>> tmin;

    std::size_t size() const { return values.size(); }
    std::size_t missing_count() const {
        return std::size_t(std::count(values.begin(), values.end(), std::nullopt));
    }
    double missing_fraction() const {
        return values.empty() ? 0.0 : double(missing_count()) / double(values.size());
    }
    civil_date date_at(std::size_t i) const { return add_days(start_date, std::int64_t(i)); }
    // Throws validation_error if any value is missing.
    std::vector<double> complete_values() const {
        std::vector<double> out;
        out.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values[i])
                throw validation_error("series " + station_id + " has a missing value on " +
                                       format_iso_date(date_at(i)));
            out.push_back(*values[i]);
        }
        return out;
    }
};

enum class DeseasonalizeMode {
    full,          // subtract the whole seasonal component (level, trend, sinusoid)
    sinusoid_only, // subtract the sinusoid only; level and trend stay in the series
};

// Seasonal-component-removed series; t indexes days 1..n for the seasonal fit.
struct DeseasonalizedSeries {
    std::string station_id;
    civil_date start_date{};
    std::vector<double> values;
    DeseasonalizeMode mode = DeseasonalizeMode::full;
};

} // namespace tempdyn
