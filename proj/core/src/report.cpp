#include "tempdyn/report.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "tempdyn/errors.hpp"

namespace tempdyn {

namespace {

std::string pad(const std::string& s, std::size_t width, bool left_align) {
    if (s.size() >= width)
        return s;
    const std::string fill(width - s.size(), ' ');
    return left_align ? s + fill : fill + s;
}

// rows[0] is the header; column 0 is left-aligned, the rest right-aligned.
std::string layout(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size())
            widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0)
                out += "  ";
            out += pad(row[c], widths[c], c == 0);
        }
        while (!out.empty() && out.back() == ' ')
            out.pop_back();
        out += '\n';
    }
    return out;
}

std::string cell(const ordered_json& v) {
    if (v.is_null())
        return "-";
    if (v.is_boolean())
        return v.get<bool>() ? "yes" : "no";
    if (v.is_number_unsigned() || v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number())
        return format_table_number(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    return "-";
}

// Pulls a possibly nested field ("jarque_bera.statistic") out of a section.
ordered_json dig(const ordered_json& section, const std::string& path) {
    const ordered_json* node = &section;
    std::size_t begin = 0;
    while (true) {
        const std::size_t dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot - begin);
        if (!node->is_object() || !node->contains(key))
            return nullptr;
        node = &node->at(key);
        if (dot == std::string::npos)
            return *node;
        begin = dot + 1;
    }
}

const ordered_json& stations_of(const ordered_json& report) {
    if (!report.is_object() || !report.contains("stations") ||
        !report.at("stations").is_object() || report.at("stations").empty())
        throw validation_error("report has no stations to render");
    return report.at("stations");
}

// One row per station, fixed column list.
std::string render_station_rows(const ordered_json& report, const std::string& section,
                                const std::vector<std::pair<std::string, std::string>>& columns) {
    const ordered_json& stations = stations_of(report);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"station"};
    for (const auto& [title, path] : columns)
        header.push_back(title);
    rows.push_back(std::move(header));
    for (const auto& [id, body] : stations.items()) {
        if (!body.contains(section))
            continue;
        std::vector<std::string> row = {id};
        for (const auto& [title, path] : columns)
            row.push_back(cell(dig(body.at(section), path)));
        rows.push_back(std::move(row));
    }
    if (rows.size() == 1)
        throw validation_error("no station in the report carries section '" + section + "'");
    return layout(rows);
}

// Per-station blocks with one column per family object.
std::string render_family_blocks(const ordered_json& report, const std::string& section,
                                 const std::vector<std::string>& field_rows) {
    const ordered_json& stations = stations_of(report);
    std::string out;
    bool any = false;
    for (const auto& [id, body] : stations.items()) {
        if (!body.contains(section) || !body.at(section).is_object() ||
            body.at(section).empty())
            continue;
        any = true;
        const ordered_json& fits = body.at(section);
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> header = {id};
        for (const auto& [family, params] : fits.items())
            header.push_back(family);
        rows.push_back(std::move(header));
        for (const std::string& field : field_rows) {
            std::vector<std::string> row = {field};
            for (const auto& [family, params] : fits.items())
                row.push_back(cell(dig(params, field)));
            rows.push_back(std::move(row));
        }
        if (!out.empty())
            out += '\n';
        out += layout(rows);
    }
    if (!any)
        throw validation_error("no station in the report carries section '" + section + "'");
    return out;
}

} // namespace

std::string format_table_number(double v) {
    if (!std::isfinite(v))
        return "-";
    char buffer[64];
    const double a = std::fabs(v);
    if (v != 0.0 && (a < 1e-4 || a >= 1e7))
        std::snprintf(buffer, sizeof(buffer), "%.4e", v);
    else
        std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

std::vector<std::string> renderable_tables() {
    return {"descriptive", "seasonality", "residual_diagnostics",
            "tml_fit",     "distribution_fits", "distribution_gof"};
}

std::string render_table(const ordered_json& report, const std::string& which) {
    if (which == "descriptive")
        return render_station_rows(report, "descriptive",
                                   {{"count", "count"},
                                    {"mean", "mean"},
                                    {"median", "median"},
                                    {"mode", "mode"},
                                    {"std", "stddev"},
                                    {"min", "min"},
                                    {"max", "max"},
                                    {"skewness", "skewness"},
                                    {"kurtosis", "kurtosis"}});
    if (which == "seasonality")
        return render_station_rows(report, "seasonality",
                                   {{"A0", "a0"}, {"A1", "a1"}, {"A2", "a2"}, {"phi", "phi"}});
    if (which == "residual_diagnostics")
        return render_station_rows(
            report, "residual_diagnostics",
            {{"JB", "jarque_bera.statistic"},
             {"JB p", "jarque_bera.p_value"},
             {"chi2", "pearson_chi2.statistic"},
             {"chi2 p", "pearson_chi2.p_value"},
             {"A-D", "anderson_darling.statistic"},
             {"A-D p", "anderson_darling.p_value"},
             {"ARCH", "engle_arch.statistic"},
             {"ARCH p", "engle_arch.p_value"},
             {"Hurst", "hurst.exponent"}});
    if (which == "tml_fit")
        return render_station_rows(report, "tml_fit",
                                   {{"sigma_1", "sigma_1"},
                                    {"kappa", "kappa"},
                                    {"mu", "mu"},
                                    {"sigma_2", "sigma_2"},
                                    {"P11", "p11"},
                                    {"P22", "p22"}});
    if (which == "distribution_fits")
        return render_family_blocks(report, "distribution_fits",
                                    {"nu", "alpha", "beta", "mu", "delta"});
    if (which == "distribution_gof")
        return render_family_blocks(report, "distribution_gof",
                                    {"kolmogorov_smirnov", "anderson_darling"});
    throw validation_error("unknown table '" + which + "'");
}

} // namespace tempdyn
