#include "tempdyn/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "tempdyn/csv.hpp"
#include "tempdyn/errors.hpp"

namespace tempdyn {

double daily_average(double tmax, double tmin) {
    if (tmax < tmin)
        throw validation_error("daily_average: tmax " + format_double(tmax) + " is below tmin " +
                               format_double(tmin));
    return (tmax + tmin) / 2.0;
}

std::optional<double> daily_average(std::optional<double> tmax, std::optional<double> tmin) {
    if (!tmax || !tmin)
        return std::nullopt;
    return daily_average(*tmax, *tmin);
}

namespace {

std::string line_context(const std::filesystem::path& path, std::size_t line_no) {
    return path.filename().string() + " line " + std::to_string(line_no);
}

} // namespace

TemperatureSeries load_station_csv(const std::filesystem::path& path, const LoadOptions& options) {
    const std::string text = read_text_file(path);

    TemperatureSeries series;
    series.station_id = options.station_id.empty() ? path.stem().string() : options.station_id;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool has_tavg_column = false;
    bool have_prev = false;
    civil_date prev_date{};

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        const std::vector<std::string> fields = split_csv_line(line);
        if (!have_header) {
            if (fields.size() == 3 && fields[0] == "date" && fields[1] == "tmax" &&
                fields[2] == "tmin") {
                has_tavg_column = false;
            } else if (fields.size() == 4 && fields[0] == "date" && fields[1] == "tmax" &&
                       fields[2] == "tmin" && fields[3] == "tavg") {
                has_tavg_column = true;
            } else {
                throw validation_error(line_context(path, line_no) +
                                       ": expected header date,tmax,tmin[,tavg], got \"" + line +
                                       "\"");
            }
            have_header = true;
            continue;
        }

        const std::size_t expected = has_tavg_column ? 4u : 3u;
        if (fields.size() != expected)
            throw validation_error(line_context(path, line_no) + ": expected " +
                                   std::to_string(expected) + " fields, got " +
                                   std::to_string(fields.size()));

        const std::string where = line_context(path, line_no);
        const civil_date date = parse_iso_date(fields[0], where + " date");
        const std::optional<double> tmax = parse_optional_double(fields[1], where + " tmax");
        const std::optional<double> tmin = parse_optional_double(fields[2], where + " tmin");
        std::optional<double> tavg;
        if (has_tavg_column)
            tavg = parse_optional_double(fields[3], where + " tavg");

        if (have_prev) {
            if (date == prev_date)
                throw validation_error(where + ": duplicate date " + format_iso_date(date));
            if (date < prev_date)
                throw validation_error(where + ": dates must be strictly increasing (" +
                                       format_iso_date(date) + " after " +
                                       format_iso_date(prev_date) + ")");
            const std::int64_t gap = days_between(prev_date, date) - 1;
            for (std::int64_t g = 0; g < gap; ++g) {
                series.values.emplace_back();
                series.tmax.emplace_back();
                series.tmin.emplace_back();
            }
        } else {
            series.start_date = date;
        }

        std::optional<double> value = tavg;
        if (!value) {
            try {
                value = daily_average(tmax, tmin);
            } catch (const validation_error& e) {
                throw validation_error(where + ": " + e.what());
            }
        }
        series.values.push_back(value);
        series.tmax.push_back(tmax);
        series.tmin.push_back(tmin);

        prev_date = date;
        have_prev = true;
    }

    if (!have_header)
        throw validation_error(path.string() + ": empty file, expected a header row");
    if (series.values.empty())
        throw validation_error(path.string() + ": no data rows");
    return series;
}

void write_station_csv(const TemperatureSeries& series, const std::filesystem::path& path) {
    std::string out = "date,tmax,tmin,tavg\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_iso_date(series.date_at(i));
        out += ',';
        if (i < series.tmax.size() && series.tmax[i])
            out += format_double(*series.tmax[i]);
        out += ',';
        if (i < series.tmin.size() && series.tmin[i])
            out += format_double(*series.tmin[i]);
        out += ',';
        if (series.values[i])
            out += format_double(*series.values[i]);
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

namespace {

// Mean of the nearest `want` valued entries strictly before/after index i.
// `step` is -1 (earlier) or +1 (later). Throws if the series edge arrives
// before enough values were found.
double side_mean(const TemperatureSeries& s, std::size_t i, int step, int want) {
    double sum = 0.0;
    int got = 0;
    std::int64_t j = std::int64_t(i) + step;
    while (j >= 0 && j < std::int64_t(s.size()) && got < want) {
        if (s.values[std::size_t(j)]) {
            sum += *s.values[std::size_t(j)];
            ++got;
        }
        j += step;
    }
    if (got < want)
        throw validation_error("fill_missing: cannot fill " + format_iso_date(s.date_at(i)) +
                               ": only " + std::to_string(got) + " of " + std::to_string(want) +
                               " valued days exist " + (step < 0 ? "before" : "after") + " it");
    return sum / double(want);
}

// Mean over all prior years of the value at the same calendar date (Feb 29
// maps to Feb 28 in non-leap years). Throws if no prior year has a value.
double prior_year_mean(const TemperatureSeries& s, std::size_t i) {
    const civil_date d = s.date_at(i);
    double sum = 0.0;
    int got = 0;
    for (int y = int(d.year()) - 1; y >= int(s.start_date.year()); --y) {
        civil_date target{std::chrono::year{y}, d.month(), d.day()};
        if (!target.ok())
            target = civil_date{std::chrono::year{y}, std::chrono::February, std::chrono::day{28}};
        const std::int64_t idx = days_between(s.start_date, target);
        if (idx < 0 || idx >= std::int64_t(s.size()))
            continue;
        if (s.values[std::size_t(idx)]) {
            sum += *s.values[std::size_t(idx)];
            ++got;
        }
    }
    if (got == 0)
        throw validation_error("fill_missing: cannot fill " + format_iso_date(d) +
                               ": no prior year has a value for that calendar day");
    return sum / double(got);
}

} // namespace

TemperatureSeries fill_missing(const TemperatureSeries& series, int window_days) {
    if (window_days < 1)
        throw validation_error("fill_missing: window_days must be >= 1");
    const double fraction = series.missing_fraction();
    if (fraction > 0.10)
        throw validation_error(
            "fill_missing: refusing series " + series.station_id + ": " +
            format_double(100.0 * fraction) +
            "% of days are missing, above the 10% limit for trustworthy filling");

    TemperatureSeries out = series;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.values[i])
            continue;
        const double day_part = 0.5 * (side_mean(out, i, -1, window_days) +
                                       side_mean(out, i, +1, window_days));
        const double year_part = prior_year_mean(out, i);
        out.values[i] = 0.5 * (day_part + year_part);
    }
    return out;
}

DescriptiveStats descriptive_stats(const std::vector<double>& values) {
    if (values.empty())
        throw validation_error("descriptive_stats: empty series");
    const std::size_t n = values.size();

    DescriptiveStats d;
    d.count = n;

    // Exactly-constant input: report the value itself with zero spread rather
    // than rounding noise from the mean subtraction.
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        d.mean = d.median = d.mode = d.minimum = d.maximum = values.front();
        d.mode = double(std::llround(values.front() * 10.0)) / 10.0;
        return d;
    }

    double sum = 0.0;
    for (double v : values)
        sum += v;
    d.mean = sum / double(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double c = v - d.mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= double(n);
    m3 /= double(n);
    m4 /= double(n);
    d.stddev = n > 1 ? std::sqrt(m2 * double(n) / double(n - 1)) : 0.0;
    d.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    d.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    d.minimum = sorted.front();
    d.maximum = sorted.back();
    d.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    // Mode at 0.1 degC resolution; smallest value wins ties. The map is keyed
    // by the rounded tenth so iteration order is ascending by value.
    std::map<long long, std::size_t> counts;
    for (double v : sorted)
        ++counts[std::llround(v * 10.0)];
    long long best_key = counts.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [key, count] : counts) {
        if (count > best_count) {
            best_key = key;
            best_count = count;
        }
    }
    d.mode = double(best_key) / 10.0;

    return d;
}

DescriptiveStats descriptive_stats(const TemperatureSeries& series) {
    return descriptive_stats(series.complete_values());
}

} // namespace tempdyn
