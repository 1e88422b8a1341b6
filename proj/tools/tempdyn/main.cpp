// tempdyn: daily-temperature model toolkit.
//
// Subcommands compose through the documented CSV/JSON formats, so each stage
// can run standalone or the whole chain can run at once via `pipeline`.
// Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
// failure, 4 I/O trouble, 1 anything unexpected.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempdyn/csv.hpp"
#include "tempdyn/errors.hpp"
#include "tempdyn/ghdist.hpp"
#include "tempdyn/ghfit.hpp"
#include "tempdyn/indices.hpp"
#include "tempdyn/ingest.hpp"
#include "tempdyn/pipeline.hpp"
#include "tempdyn/regime.hpp"
#include "tempdyn/report.hpp"
#include "tempdyn/seasonal.hpp"
#include "tempdyn/serialize.hpp"
#include "tempdyn/simulate.hpp"
#include "tempdyn/stats.hpp"

namespace fs = std::filesystem;
using namespace tempdyn;

namespace {

// The only environment variable the tool honors: the default output
// directory. Every path that matters for results is an explicit flag.
fs::path default_output_dir() {
    if (const char* dir = std::getenv("TEMPDYN_OUTPUT_DIR"); dir && *dir)
        return fs::path(dir);
    return fs::path(".");
}

void add_output_dir_flag(CLI::App* cmd, fs::path& out) {
    out = default_output_dir();
    cmd->add_option("-o,--output-dir", out,
                    "Directory for result files (default: $TEMPDYN_OUTPUT_DIR or .)");
}

void write_json(const fs::path& path, const ordered_json& j) {
    write_text_file_atomic(path, j.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
}

void write_csv(const fs::path& path, const std::string& content) {
    write_text_file_atomic(path, content);
    std::cout << "wrote " << path.string() << "\n";
}

ordered_json load_json(const fs::path& path) {
    try {
        return ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path.string() + ": " + e.what());
    }
}

// Simple header+rows view of a CSV file.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name, const std::string& file) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name)
                return c;
        throw validation_error(file + ": no column named '" + name + "'");
    }
};

CsvTable read_csv_table(const fs::path& path) {
    const std::string text = read_text_file(path);
    CsvTable table;
    std::size_t begin = 0;
    bool first = true;
    while (begin < text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string::npos)
            end = text.size();
        std::string line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty()) {
            if (first) {
                table.header = split_csv_line(line);
                first = false;
            } else {
                auto fields = split_csv_line(line);
                if (fields.size() != table.header.size())
                    throw validation_error(path.string() + " row " +
                                           std::to_string(table.rows.size() + 2) + ": expected " +
                                           std::to_string(table.header.size()) + " fields, got " +
                                           std::to_string(fields.size()));
                table.rows.push_back(std::move(fields));
            }
        }
        begin = end + 1;
    }
    if (first)
        throw validation_error(path.string() + ": empty file");
    return table;
}

std::vector<double> numeric_column(const CsvTable& table, std::size_t c,
                                   const std::string& file) {
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        out.push_back(parse_double(table.rows[r][c],
                                   file + " row " + std::to_string(r + 2)));
    return out;
}

// Strips a known stage suffix so chained commands keep one station name:
// harbor_filled.csv -> harbor, harbor_residuals.csv -> harbor.
std::string station_name_from(const fs::path& input, std::string explicit_name) {
    if (!explicit_name.empty())
        return explicit_name;
    std::string stem = input.stem().string();
    for (const char* suffix : {"_filled", "_deseasonalized", "_residuals", "_series"}) {
        const std::string s(suffix);
        if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0)
            return stem.substr(0, stem.size() - s.size());
    }
    return stem;
}

// Values column for calibration input: the decomposition CSV's
// `deseasonalized` column, or the second column of a two-column file.
std::pair<std::vector<std::string>, std::vector<double>>
dates_and_values(const CsvTable& table, const std::string& file) {
    std::size_t value_col;
    if (std::find(table.header.begin(), table.header.end(), "deseasonalized") !=
        table.header.end())
        value_col = table.column("deseasonalized", file);
    else if (table.header.size() == 2)
        value_col = 1;
    else
        throw validation_error(file + ": expected a 'deseasonalized' column or a two-column "
                                      "date,value file");
    const std::size_t date_col = table.column("date", file);
    std::vector<std::string> dates;
    dates.reserve(table.rows.size());
    for (const auto& row : table.rows)
        dates.push_back(row[date_col]);
    return {std::move(dates), numeric_column(table, value_col, file)};
}

GHParams params_from_family_map(const ordered_json& fits, const std::string& family,
                                const std::string& file) {
    if (!fits.contains(family))
        throw validation_error(file + ": no fitted parameters for family '" + family + "'");
    ordered_json entry = fits.at(family);
    entry["family"] = family; // the map key carries the family name
    return gh_params_from_json(entry);
}

// ------------------------------------------------------------- subcommands --

struct IngestArgs {
    fs::path input;
    std::string station_id;
    int fill_window = 7;
    fs::path output_dir;
};

int run_ingest(const IngestArgs& args) {
    LoadOptions options;
    options.station_id = args.station_id;
    const TemperatureSeries raw = load_station_csv(args.input, options);
    const TemperatureSeries filled = fill_missing(raw, args.fill_window);
    const DescriptiveStats stats = descriptive_stats(filled);

    fs::create_directories(args.output_dir);
    const std::string id = filled.station_id;
    write_station_csv(filled, args.output_dir / (id + "_filled.csv"));
    std::cout << "wrote " << (args.output_dir / (id + "_filled.csv")).string() << "\n";

    ordered_json d;
    d["station"] = id;
    d["count"] = stats.count;
    d["filled_missing"] = raw.missing_count();
    d["mean"] = json_number(stats.mean);
    d["median"] = json_number(stats.median);
    d["mode"] = json_number(stats.mode);
    d["stddev"] = json_number(stats.stddev);
    d["min"] = json_number(stats.minimum);
    d["max"] = json_number(stats.maximum);
    d["skewness"] = json_number(stats.skewness);
    d["kurtosis"] = json_number(stats.kurtosis);
    write_json(args.output_dir / (id + "_descriptive.json"), d);
    std::cout << id << ": " << stats.count << " days, " << raw.missing_count()
              << " filled\n";
    return 0;
}

struct DeseasonalizeArgs {
    fs::path input;
    std::string station_id;
    std::string mode = "full";
    std::string phase = "signed";
    fs::path output_dir;
};

int run_deseasonalize(const DeseasonalizeArgs& args) {
    LoadOptions options;
    options.station_id = station_name_from(args.input, args.station_id);
    const TemperatureSeries series = load_station_csv(args.input, options);
    const SeasonalFitRaw raw_fit = fit_seasonal(series);
    const SeasonalParams params =
        args.phase == "signed" ? to_amplitude_phase_signed(raw_fit) : to_amplitude_phase(raw_fit);
    const DeseasonalizeMode mode =
        args.mode == "full" ? DeseasonalizeMode::full : DeseasonalizeMode::sinusoid_only;
    const DeseasonalizedSeries core = deseasonalize(series, params, mode);

    fs::create_directories(args.output_dir);
    const std::string id = series.station_id;
    ordered_json p = seasonal_to_json(params);
    p["mode"] = args.mode;
    p["phase_convention"] = args.phase;
    p["residual_sum_squares"] = json_number(raw_fit.residual_sum_squares);
    write_json(args.output_dir / (id + "_seasonal.json"), p);

    std::string csv = "date,temperature,seasonal,deseasonalized\n";
    for (std::size_t i = 0; i < core.values.size(); ++i) {
        csv += format_iso_date(series.date_at(i));
        csv += ',';
        csv += format_double(*series.values[i]);
        csv += ',';
        csv += format_double(seasonal_value(params, double(i + 1)));
        csv += ',';
        csv += format_double(core.values[i]);
        csv += '\n';
    }
    write_csv(args.output_dir / (id + "_deseasonalized.csv"), csv);
    return 0;
}

struct CalibrateArgs {
    fs::path input;
    std::string station_id;
    double tolerance = 1e-6;
    int max_iterations = 500;
    int extra_starts = 0;
    std::uint64_t seed = 0;
    double threshold = 0.8;
    bool error_on_degenerate = false;
    fs::path output_dir;
};

int run_calibrate(const CalibrateArgs& args) {
    const CsvTable table = read_csv_table(args.input);
    const auto [dates, values] = dates_and_values(table, args.input.string());

    EMConfig config;
    config.tolerance = args.tolerance;
    config.max_iterations = args.max_iterations;
    config.extra_starts = args.extra_starts;
    config.jitter_seed = args.seed;
    config.guard.error_on_degenerate = args.error_on_degenerate;
    const EMResult em = em_calibrate(values, initial_model(values, config.guard), config);

    FilterOptions filter_options;
    filter_options.guard = config.guard;
    const FilterOutput filtered = hamilton_filter(values, em.model,
                                                  stationary_distribution(em.model.trans),
                                                  filter_options);
    const auto smoothed = kim_smooth(filtered, em.model.trans);
    const auto labels = classify_regimes(smoothed, args.threshold);
    const RegimeResiduals residuals =
        extract_regime_residuals(values, em.model, smoothed, config.guard);

    fs::create_directories(args.output_dir);
    const std::string id = station_name_from(args.input, args.station_id);

    ordered_json model = regime_model_to_json(em.model);
    model["loglik"] = json_number(em.trace.back().loglik);
    model["iterations"] = em.iterations;
    model["converged"] = em.converged;
    model["level_floor_count"] = em.level_floor_count;
    ordered_json trace = ordered_json::array();
    for (const auto& point : em.trace)
        trace.push_back(json_number(point.loglik));
    model["loglik_trace"] = std::move(trace);
    write_json(args.output_dir / (id + "_model.json"), model);

    std::string regimes = "date,prob_extreme,label\n";
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        regimes += dates[i];
        regimes += ',';
        regimes += format_double(smoothed[i][1]);
        regimes += ',';
        regimes += regime_label_name(labels[i]);
        regimes += '\n';
    }
    write_csv(args.output_dir / (id + "_regimes.csv"), regimes);

    std::string pooled = "date,residual\n";
    for (std::size_t i = 0; i < residuals.pooled.size(); ++i) {
        pooled += dates[i + 1];
        pooled += ',';
        pooled += format_double(residuals.pooled[i]);
        pooled += '\n';
    }
    write_csv(args.output_dir / (id + "_residuals.csv"), pooled);

    std::cout << id << ": converged=" << (em.converged ? "yes" : "no")
              << " iterations=" << em.iterations
              << " loglik=" << format_double(em.trace.back().loglik) << "\n";
    return 0;
}

struct FitdistArgs {
    fs::path input;
    std::string station_id;
    std::vector<std::string> families = {"normal", "hyp", "nig"};
    fs::path output_dir;
};

int run_fitdist(const FitdistArgs& args) {
    const CsvTable table = read_csv_table(args.input);
    const std::vector<double> residuals =
        numeric_column(table, table.column("residual", args.input.string()),
                       args.input.string());

    ordered_json fits;
    for (const std::string& name : args.families) {
        const GHFamily family = family_from_name(name);
        const FitResult fit = fit_mle(residuals, family);
        ordered_json f = gh_params_to_json(fit.params);
        f.erase("family");
        f["loglik"] = json_number(fit.loglik);
        f["converged"] = fit.converged;
        fits[name] = std::move(f);
        std::cout << name << ": loglik=" << format_double(fit.loglik) << "\n";
    }
    fs::create_directories(args.output_dir);
    const std::string id = station_name_from(args.input, args.station_id);
    write_json(args.output_dir / (id + "_distribution_fits.json"), fits);
    return 0;
}

struct GofArgs {
    fs::path residuals;
    fs::path fits;
    std::string station_id;
    fs::path output_dir;
};

int run_gof(const GofArgs& args) {
    const CsvTable table = read_csv_table(args.residuals);
    const std::vector<double> residuals =
        numeric_column(table, table.column("residual", args.residuals.string()),
                       args.residuals.string());
    const ordered_json fits = load_json(args.fits);
    if (!fits.is_object() || fits.empty())
        throw validation_error(args.fits.string() + ": expected a family->parameters object");

    std::vector<double> sorted = residuals;
    std::sort(sorted.begin(), sorted.end());

    ordered_json gof;
    for (const auto& [family, entry] : fits.items()) {
        const GHParams params = params_from_family_map(fits, family, args.fits.string());
        const std::vector<double> probs = cdf_sorted(params, sorted);
        const auto table_cdf = [&](double x) {
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
            if (it == sorted.end())
                return probs.back();
            return probs[std::size_t(it - sorted.begin())];
        };
        const TestResult ks = kolmogorov_smirnov(residuals, table_cdf);
        const TestResult ad = anderson_darling(residuals, table_cdf, true);
        ordered_json g;
        g["kolmogorov_smirnov"] =
            json_number(ks.scaled_statistic ? *ks.scaled_statistic : ks.statistic);
        g["ks_p_value"] = ks.p_value ? json_number(*ks.p_value) : ordered_json(nullptr);
        g["anderson_darling"] = json_number(ad.statistic);
        g["ad_p_value"] = ad.p_value ? json_number(*ad.p_value) : ordered_json(nullptr);
        gof[family] = std::move(g);
        std::cout << family << ": K-S=" << format_table_number(ks.scaled_statistic
                                                                   ? *ks.scaled_statistic
                                                                   : ks.statistic)
                  << " A-D=" << format_table_number(ad.statistic) << "\n";
    }
    fs::create_directories(args.output_dir);
    const std::string id = station_name_from(args.residuals, args.station_id);
    write_json(args.output_dir / (id + "_distribution_gof.json"), gof);
    return 0;
}

struct SimulateArgs {
    fs::path model;
    fs::path seasonal;
    std::string name = "sim";
    std::size_t days = 365;
    std::size_t paths = 1;
    std::uint64_t seed = 0;
    double initial_value = 0.0;
    std::string mode = "full";
    fs::path innovation_fits;
    std::string innovation_family;
    bool allow_unstable = false;
    fs::path output_dir;
};

int run_simulate(const SimulateArgs& args) {
    SimulationSpec spec;
    spec.model = regime_model_from_json(load_json(args.model));
    spec.seasonal = seasonal_from_json(load_json(args.seasonal));
    spec.deseasonalize_mode =
        args.mode == "full" ? DeseasonalizeMode::full : DeseasonalizeMode::sinusoid_only;
    spec.n_days = args.days;
    spec.n_paths = args.paths;
    spec.seed = args.seed;
    spec.initial_value = args.initial_value;
    spec.allow_unstable = args.allow_unstable;
    if (!args.innovation_family.empty()) {
        if (args.innovation_fits.empty())
            throw validation_error("--innovation-family needs --innovation-fits");
        spec.shifted_innovation = params_from_family_map(
            load_json(args.innovation_fits), args.innovation_family,
            args.innovation_fits.string());
    }
    const SimulatedPaths paths = simulate_paths(spec);
    fs::create_directories(args.output_dir);
    write_csv(args.output_dir / (args.name + "_paths.csv"), paths_to_csv(paths));
    return 0;
}

struct IndicesArgs {
    fs::path input;
    std::string name;
    std::string kind = "cat";
    std::size_t tau1 = 0;
    std::size_t tau2 = 0;
    std::optional<double> t_optimal;
    fs::path output_dir;
};

int run_indices(const IndicesArgs& args) {
    IndexSpec spec;
    spec.kind = index_kind_from_name(args.kind);
    spec.tau1 = args.tau1;
    spec.tau2 = args.tau2;
    spec.t_optimal = args.t_optimal;

    const CsvTable table = read_csv_table(args.input);
    const std::string file = args.input.string();

    ordered_json result;
    result["kind"] = args.kind;
    result["tau1"] = args.tau1;
    result["tau2"] = args.tau2;
    if (args.t_optimal)
        result["t_optimal"] = *args.t_optimal;

    if (!table.header.empty() && table.header.front() == "path_id") {
        // Simulated paths: one index value per path, reduced to a summary.
        const std::size_t id_col = table.column("path_id", file);
        const std::size_t temp_col = table.column("temperature", file);
        std::vector<std::vector<double>> paths;
        std::map<std::string, std::size_t> path_rows;
        for (const auto& row : table.rows) {
            auto [it, inserted] = path_rows.emplace(row[id_col], paths.size());
            if (inserted)
                paths.emplace_back();
            paths[it->second].push_back(
                parse_double(row[temp_col], file + " temperature"));
        }
        const IndexDistribution dist = index_distribution(paths, spec);
        result["paths"] = paths.size();
        result["mean"] = json_number(dist.mean);
        result["stddev"] = json_number(dist.stddev);
        ordered_json quantiles;
        for (std::size_t q = 0; q < dist.quantile_levels.size(); ++q) {
            char key[16];
            std::snprintf(key, sizeof(key), "p%02d",
                          int(std::lround(dist.quantile_levels[q] * 100.0)));
            quantiles[key] = json_number(dist.quantiles[q]);
        }
        result["quantiles"] = std::move(quantiles);
        std::cout << args.kind << "[" << args.tau1 << "," << args.tau2
                  << "]: mean=" << format_table_number(dist.mean)
                  << " stddev=" << format_table_number(dist.stddev) << " over " << paths.size()
                  << " paths\n";
    } else {
        // Observed series: single value from the temperature (or sole value)
        // column.
        std::size_t value_col;
        if (std::find(table.header.begin(), table.header.end(), "temperature") !=
            table.header.end())
            value_col = table.column("temperature", file);
        else if (table.header.size() == 2)
            value_col = 1;
        else
            throw validation_error(file + ": expected a 'temperature' column, a two-column "
                                          "date,value file, or a path_id paths file");
        const std::vector<double> series = numeric_column(table, value_col, file);
        const double value = index_value(series, spec);
        result["observed"] = json_number(value);
        std::cout << args.kind << "[" << args.tau1 << "," << args.tau2
                  << "]: " << format_double(value) << "\n";
    }

    fs::create_directories(args.output_dir);
    const std::string name =
        args.name.empty() ? station_name_from(args.input, "") : args.name;
    write_json(args.output_dir / (name + "_" + args.kind + "_index.json"), result);
    return 0;
}

struct ReportArgs {
    fs::path input;
    std::vector<std::string> tables;
    bool all = false;
};

int run_report(const ReportArgs& args) {
    const ordered_json report = load_json(args.input);
    std::vector<std::string> which = args.tables;
    if (args.all || which.empty())
        which = renderable_tables();
    bool first = true;
    for (const std::string& table : which) {
        if (!first)
            std::cout << "\n";
        first = false;
        std::cout << "# " << table << "\n" << render_table(report, table);
    }
    return 0;
}

struct PipelineArgs {
    fs::path config;
    fs::path output_dir;
    bool render = false;
};

int run_pipeline_cmd(const PipelineArgs& args) {
    const PipelineConfig config = load_pipeline_config(args.config);
    const PipelineResult result = run_pipeline(config, args.output_dir);
    for (const std::string& name : result.artifacts)
        std::cout << "wrote " << (args.output_dir / name).string() << "\n";
    if (args.render) {
        for (const std::string& table : renderable_tables())
            std::cout << "\n# " << table << "\n" << render_table(result.report, table);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-regime daily temperature model: calibration, simulation, and "
                 "temperature indices"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand(
        "ingest", "Load a station CSV (date,tmax,tmin[,tavg]), fill gaps, report stats");
    ingest->add_option("input", ingest_args.input, "Raw station CSV")->required();
    ingest->add_option("--station-id", ingest_args.station_id,
                       "Station name for outputs (default: file stem)");
    ingest->add_option("--fill-window", ingest_args.fill_window,
                       "Neighbour days on each side for gap filling");
    add_output_dir_flag(ingest, ingest_args.output_dir);

    DeseasonalizeArgs deseason_args;
    auto* deseason = app.add_subcommand(
        "deseasonalize", "Fit and remove the trend+sinusoid seasonal component");
    deseason->add_option("input", deseason_args.input, "Filled station CSV")->required();
    deseason->add_option("--station-id", deseason_args.station_id, "Station name for outputs");
    deseason->add_option("--mode", deseason_args.mode, "Component to remove")
        ->check(CLI::IsMember({"full", "sinusoid_only"}));
    deseason->add_option("--phase-convention", deseason_args.phase,
                         "Amplitude-phase normalization")
        ->check(CLI::IsMember({"signed", "principal"}));
    add_output_dir_flag(deseason, deseason_args.output_dir);

    CalibrateArgs calibrate_args;
    auto* calibrate = app.add_subcommand(
        "calibrate", "EM calibration of the two-regime model on a deseasonalized series");
    calibrate->add_option("input", calibrate_args.input, "Deseasonalized series CSV")
        ->required();
    calibrate->add_option("--station-id", calibrate_args.station_id, "Station name for outputs");
    calibrate->add_option("--tolerance", calibrate_args.tolerance,
                          "Log-likelihood convergence tolerance");
    calibrate->add_option("--max-iterations", calibrate_args.max_iterations,
                          "Iteration cap per start");
    calibrate->add_option("--extra-starts", calibrate_args.extra_starts,
                          "Additional jittered initializations");
    calibrate->add_option("--seed", calibrate_args.seed, "Seed for jittered starts");
    calibrate->add_option("--threshold", calibrate_args.threshold,
                          "Smoothed-probability cutoff for the extreme label");
    calibrate->add_flag("--error-on-degenerate-level", calibrate_args.error_on_degenerate,
                        "Refuse series whose level reaches the noise floor");
    add_output_dir_flag(calibrate, calibrate_args.output_dir);

    FitdistArgs fitdist_args;
    auto* fitdist = app.add_subcommand(
        "fitdist", "Maximum-likelihood distribution fits to calibration residuals");
    fitdist->add_option("input", fitdist_args.input, "Residuals CSV (date,residual)")
        ->required();
    fitdist->add_option("--station-id", fitdist_args.station_id, "Station name for outputs");
    fitdist->add_option("--family", fitdist_args.families,
                        "Families to fit (repeatable: gh, nig, hyp, vg, normal)")
        ->check(CLI::IsMember({"gh", "nig", "hyp", "vg", "normal"}));
    add_output_dir_flag(fitdist, fitdist_args.output_dir);

    GofArgs gof_args;
    auto* gof = app.add_subcommand(
        "gof", "Kolmogorov-Smirnov and Anderson-Darling tests of fitted distributions");
    gof->add_option("--residuals", gof_args.residuals, "Residuals CSV (date,residual)")
        ->required();
    gof->add_option("--fits", gof_args.fits, "Fitted parameters JSON from fitdist")
        ->required();
    gof->add_option("--station-id", gof_args.station_id, "Station name for outputs");
    add_output_dir_flag(gof, gof_args.output_dir);

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo paths of the fitted model with the seasonal component");
    simulate->add_option("--model", simulate_args.model, "Model JSON from calibrate")
        ->required();
    simulate->add_option("--seasonal", simulate_args.seasonal,
                         "Seasonal parameter JSON from deseasonalize")
        ->required();
    simulate->add_option("--name", simulate_args.name, "Output name prefix");
    simulate->add_option("--days", simulate_args.days, "Days per path");
    simulate->add_option("--paths", simulate_args.paths, "Number of paths");
    simulate->add_option("--seed", simulate_args.seed, "Simulation seed");
    simulate->add_option("--initial-value", simulate_args.initial_value,
                         "Starting level on the deseasonalized scale");
    simulate->add_option("--mode", simulate_args.mode, "Seasonal recomposition mode")
        ->check(CLI::IsMember({"full", "sinusoid_only"}));
    simulate->add_option("--innovation-fits", simulate_args.innovation_fits,
                         "Fitted parameters JSON for shifted-regime innovations");
    simulate->add_option("--innovation-family", simulate_args.innovation_family,
                         "Family to draw shifted-regime innovations from");
    simulate->add_flag("--allow-unstable", simulate_args.allow_unstable,
                       "Permit |1 + kappa| >= 1 (non-contracting base regime)");
    add_output_dir_flag(simulate, simulate_args.output_dir);

    IndicesArgs indices_args;
    auto* indices = app.add_subcommand(
        "indices", "Cumulative temperature indices on observed or simulated series");
    indices->add_option("--input", indices_args.input,
                        "Series CSV (temperature column) or paths CSV from simulate")
        ->required();
    indices->add_option("--name", indices_args.name, "Output name prefix");
    indices->add_option("--kind", indices_args.kind, "Index type")
        ->check(CLI::IsMember({"cat", "gdd"}));
    indices->add_option("--tau1", indices_args.tau1, "Window start (0-based, inclusive)")
        ->required();
    indices->add_option("--tau2", indices_args.tau2, "Window end (0-based, inclusive)")
        ->required();
    double t_optimal_value = 0.0;
    auto* t_optimal_opt = indices->add_option("--t-optimal", t_optimal_value,
                                              "Growing-degree-day threshold (gdd only)");
    add_output_dir_flag(indices, indices_args.output_dir);

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Render report JSON as fixed-width tables");
    report->add_option("input", report_args.input, "report.json from pipeline")->required();
    report->add_option("--table", report_args.tables, "Tables to render (repeatable)");
    report->add_flag("--all", report_args.all, "Render every table (default when none given)");

    PipelineArgs pipeline_args;
    auto* pipeline = app.add_subcommand(
        "pipeline", "Full run: ingest, deseasonalize, diagnostics, calibrate, fit, "
                    "goodness of fit, indices, simulation, report");
    pipeline->add_option("--config", pipeline_args.config, "Pipeline config JSON")->required();
    add_output_dir_flag(pipeline, pipeline_args.output_dir);
    pipeline->add_flag("--render", pipeline_args.render,
                       "Also print the rendered tables after the run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : int(exit_code::validation);
    }

    try {
        if (*ingest)
            return run_ingest(ingest_args);
        if (*deseason)
            return run_deseasonalize(deseason_args);
        if (*calibrate)
            return run_calibrate(calibrate_args);
        if (*fitdist)
            return run_fitdist(fitdist_args);
        if (*gof)
            return run_gof(gof_args);
        if (*simulate)
            return run_simulate(simulate_args);
        if (*indices) {
            if (t_optimal_opt->count() > 0)
                indices_args.t_optimal = t_optimal_value;
            return run_indices(indices_args);
        }
        if (*report)
            return run_report(report_args);
        if (*pipeline)
            return run_pipeline_cmd(pipeline_args);
        return int(exit_code::validation);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(e.code());
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return int(exit_code::failure);
    }
}
