#include "tempdyn/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "tempdyn/csv.hpp"
#include "tempdyn/errors.hpp"
#include "tempdyn/ghfit.hpp"
#include "tempdyn/ingest.hpp"
#include "tempdyn/seasonal.hpp"
#include "tempdyn/simulate.hpp"
#include "tempdyn/stats.hpp"

namespace tempdyn {

namespace {

constexpr const char* library_version = "0.1.0";

// ---------------------------------------------------------------- config --

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& context) {
    if (!j.is_object())
        throw validation_error(context + ": must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (known.find(key) == known.end())
            throw validation_error(context + ": unknown key '" + key + "'");
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw validation_error("config: field '" + key + "' has the wrong type");
    }
}

DeseasonalizeMode mode_from_name(const std::string& name) {
    if (name == "full")
        return DeseasonalizeMode::full;
    if (name == "sinusoid_only")
        return DeseasonalizeMode::sinusoid_only;
    throw validation_error("config: unknown deseasonalize_mode '" + name +
                           "' (expected full or sinusoid_only)");
}

std::string mode_name(DeseasonalizeMode mode) {
    return mode == DeseasonalizeMode::full ? "full" : "sinusoid_only";
}

bool valid_station_id(const std::string& id) {
    if (id.empty())
        return false;
    for (char c : id)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

} // namespace

PipelineConfig pipeline_config_from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
    if (!j.is_object())
        throw validation_error("config: root must be a JSON object");
    reject_unknown_keys(j,
                        {"stations", "fill_window_days", "deseasonalize_mode", "signed_phase",
                         "em", "regime_threshold", "families", "engle_lags", "chi2_bins",
                         "indices", "simulation", "seed"},
                        "config");

    PipelineConfig config;
    if (!j.contains("stations") || !j.at("stations").is_array() || j.at("stations").empty())
        throw validation_error("config: 'stations' must be a nonempty array");
    for (const auto& s : j.at("stations")) {
        reject_unknown_keys(s, {"id", "csv"}, "config station");
        StationInput input;
        input.id = get_or<std::string>(s, "id", "");
        input.csv_spec = get_or<std::string>(s, "csv", "");
        if (input.csv_spec.empty())
            throw validation_error("config station '" + input.id + "': missing csv path");
        std::filesystem::path p(input.csv_spec);
        input.csv_resolved = p.is_absolute() ? p : base_dir / p;
        config.stations.push_back(std::move(input));
    }

    config.fill_window_days = get_or<int>(j, "fill_window_days", 7);
    if (j.contains("deseasonalize_mode"))
        config.deseasonalize_mode = mode_from_name(j.at("deseasonalize_mode").get<std::string>());
    config.signed_phase = get_or<bool>(j, "signed_phase", true);

    if (j.contains("em")) {
        const auto& em = j.at("em");
        reject_unknown_keys(
            em, {"tolerance", "max_iterations", "extra_starts", "error_on_degenerate_level"},
            "config em");
        config.em.tolerance = get_or<double>(em, "tolerance", config.em.tolerance);
        config.em.max_iterations = get_or<int>(em, "max_iterations", config.em.max_iterations);
        config.em.extra_starts = get_or<int>(em, "extra_starts", config.em.extra_starts);
        config.em.guard.error_on_degenerate =
            get_or<bool>(em, "error_on_degenerate_level", false);
    }

    config.regime_threshold = get_or<double>(j, "regime_threshold", 0.8);
    if (j.contains("families")) {
        config.families.clear();
        for (const auto& f : j.at("families"))
            config.families.push_back(family_from_name(f.get<std::string>()));
    }
    config.engle_lags = get_or<int>(j, "engle_lags", 12);
    config.chi2_bins = get_or<int>(j, "chi2_bins", 50);

    if (j.contains("indices")) {
        for (const auto& ix : j.at("indices")) {
            reject_unknown_keys(ix, {"kind", "tau1", "tau2", "t_optimal"}, "config index");
            IndexSpec spec;
            spec.kind = index_kind_from_name(get_or<std::string>(ix, "kind", "cat"));
            spec.tau1 = get_or<std::size_t>(ix, "tau1", 0);
            spec.tau2 = get_or<std::size_t>(ix, "tau2", 0);
            if (ix.contains("t_optimal"))
                spec.t_optimal = ix.at("t_optimal").get<double>();
            config.indices.push_back(spec);
        }
    }

    if (j.contains("simulation")) {
        const auto& sim = j.at("simulation");
        reject_unknown_keys(sim, {"n_days", "n_paths", "innovation"}, "config simulation");
        SimulationSettings settings;
        settings.n_days = get_or<std::size_t>(sim, "n_days", settings.n_days);
        settings.n_paths = get_or<std::size_t>(sim, "n_paths", settings.n_paths);
        const std::string innovation = get_or<std::string>(sim, "innovation", "gaussian");
        if (innovation != "gaussian")
            settings.innovation_family = family_from_name(innovation);
        config.simulation = settings;
    }

    config.seed = get_or<std::uint64_t>(j, "seed", 0);
    validate(config);
    return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& config_path) {
    const std::string text = read_text_file(config_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("config " + config_path.string() + ": " + e.what());
    }
    return pipeline_config_from_json(j, config_path.parent_path());
}

void validate(const PipelineConfig& config) {
    if (config.stations.empty())
        throw validation_error("config: at least one station is required");
    std::set<std::string> ids;
    for (const auto& station : config.stations) {
        if (!valid_station_id(station.id))
            throw validation_error("config: station id '" + station.id +
                                   "' must match [A-Za-z0-9_-]+");
        if (!ids.insert(station.id).second)
            throw validation_error("config: duplicate station id '" + station.id + "'");
        if (!std::filesystem::exists(station.csv_resolved))
            throw validation_error("config: input file not found for station '" + station.id +
                                   "': " + station.csv_resolved.string());
    }
    if (config.fill_window_days < 1 || config.fill_window_days > 60)
        throw validation_error("config: fill_window_days must be in [1, 60]");
    if (!(config.em.tolerance > 0.0))
        throw validation_error("config: em.tolerance must be positive");
    if (config.em.max_iterations < 1)
        throw validation_error("config: em.max_iterations must be at least 1");
    if (config.em.extra_starts < 0 || config.em.extra_starts > 64)
        throw validation_error("config: em.extra_starts must be in [0, 64]");
    if (!(config.regime_threshold > 0.0 && config.regime_threshold < 1.0))
        throw validation_error("config: regime_threshold must lie strictly inside (0, 1)");
    if (config.families.empty())
        throw validation_error("config: at least one distribution family is required");
    {
        std::set<GHFamily> seen;
        for (GHFamily f : config.families)
            if (!seen.insert(f).second)
                throw validation_error("config: duplicate family '" + family_name(f) + "'");
    }
    if (config.engle_lags < 1 || config.engle_lags > 50)
        throw validation_error("config: engle_lags must be in [1, 50]");
    if (config.chi2_bins < 4 || config.chi2_bins > 200)
        throw validation_error("config: chi2_bins must be in [4, 200]");
    for (const auto& spec : config.indices) {
        if (spec.tau1 > spec.tau2)
            throw validation_error("config: index window is inverted");
        if (spec.kind == IndexKind::gdd && !spec.t_optimal)
            throw validation_error("config: gdd index requires t_optimal");
        if (spec.kind == IndexKind::cat && spec.t_optimal)
            throw validation_error("config: t_optimal is only meaningful for gdd");
    }
    if (config.simulation) {
        if (config.simulation->n_days < 1)
            throw validation_error("config: simulation.n_days must be at least 1");
        if (config.simulation->n_paths < 1)
            throw validation_error("config: simulation.n_paths must be at least 1");
        if (config.simulation->innovation_family) {
            const GHFamily family = *config.simulation->innovation_family;
            if (std::find(config.families.begin(), config.families.end(), family) ==
                config.families.end())
                throw validation_error("config: simulation innovation family '" +
                                       family_name(family) +
                                       "' is not in the fitted family list");
        }
    }
}

ordered_json config_snapshot(const PipelineConfig& config) {
    ordered_json j;
    j["stations"] = ordered_json::array();
    for (const auto& station : config.stations) {
        ordered_json s;
        s["id"] = station.id;
        s["csv"] = station.csv_spec;
        j["stations"].push_back(std::move(s));
    }
    j["fill_window_days"] = config.fill_window_days;
    j["deseasonalize_mode"] = mode_name(config.deseasonalize_mode);
    j["signed_phase"] = config.signed_phase;
    j["em"] = {{"tolerance", config.em.tolerance},
               {"max_iterations", config.em.max_iterations},
               {"extra_starts", config.em.extra_starts},
               {"error_on_degenerate_level", config.em.guard.error_on_degenerate}};
    j["regime_threshold"] = config.regime_threshold;
    j["families"] = ordered_json::array();
    for (GHFamily f : config.families)
        j["families"].push_back(family_name(f));
    j["engle_lags"] = config.engle_lags;
    j["chi2_bins"] = config.chi2_bins;
    j["indices"] = ordered_json::array();
    for (const auto& spec : config.indices) {
        ordered_json ix;
        ix["kind"] = index_kind_name(spec.kind);
        ix["tau1"] = spec.tau1;
        ix["tau2"] = spec.tau2;
        if (spec.t_optimal)
            ix["t_optimal"] = *spec.t_optimal;
        j["indices"].push_back(std::move(ix));
    }
    if (config.simulation) {
        j["simulation"] = {{"n_days", config.simulation->n_days},
                           {"n_paths", config.simulation->n_paths},
                           {"innovation", config.simulation->innovation_family
                                              ? family_name(*config.simulation->innovation_family)
                                              : "gaussian"}};
    }
    j["seed"] = config.seed;
    return j;
}

std::string config_hash(const PipelineConfig& config) {
    const std::string canonical = config_snapshot(config).dump();
    std::uint64_t h = 1469598103934665603ull; // FNV-1a 64 offset basis
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

// ---------------------------------------------------------------- stages --

namespace {

// Rethrows the current stage error with a stage tag and remediation hint,
// preserving the error category (and therefore the exit code).
[[noreturn]] void stage_fail(const std::string& stage, const std::string& station,
                             const std::string& hint) {
    const std::string prefix = "stage " + stage + " (" + station + "): ";
    try {
        throw;
    } catch (const validation_error& e) {
        throw validation_error(prefix + e.what() + "; hint: " + hint);
    } catch (const numeric_error& e) {
        throw numeric_error(prefix + e.what() + "; hint: " + hint);
    } catch (const io_error& e) {
        throw io_error(prefix + e.what() + "; hint: " + hint);
    } catch (const std::exception& e) {
        throw numeric_error(prefix + e.what() + "; hint: " + hint);
    }
}

ordered_json test_result_json(const TestResult& result) {
    ordered_json j;
    j["statistic"] = json_number(result.statistic);
    if (result.scaled_statistic)
        j["scaled_statistic"] = json_number(*result.scaled_statistic);
    j["p_value"] = result.p_value ? json_number(*result.p_value) : ordered_json(nullptr);
    if (!result.notes.empty())
        j["notes"] = result.notes;
    return j;
}

struct StationOutput {
    ordered_json section;                              // the station's report body
    std::vector<std::pair<std::string, std::string>> artifacts; // name -> content
};

std::string series_csv(const TemperatureSeries& filled, const SeasonalParams& seasonal,
                       const DeseasonalizedSeries& core) {
    std::string out = "date,temperature,seasonal,deseasonalized\n";
    for (std::size_t i = 0; i < filled.size(); ++i) {
        out += format_iso_date(filled.date_at(i));
        out += ',';
        out += format_double(*filled.values[i]);
        out += ',';
        out += format_double(seasonal_value(seasonal, double(i + 1)));
        out += ',';
        out += format_double(core.values[i]);
        out += '\n';
    }
    return out;
}

std::string residuals_csv(const TemperatureSeries& filled, const std::vector<double>& pooled) {
    // Residuals are one-step prediction errors, so they start on day 2.
    std::string out = "date,residual\n";
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        out += format_iso_date(filled.date_at(i + 1));
        out += ',';
        out += format_double(pooled[i]);
        out += '\n';
    }
    return out;
}

std::string regimes_csv(const TemperatureSeries& filled,
                        const std::vector<std::array<double, 2>>& smoothed,
                        const std::vector<RegimeLabel>& labels) {
    std::string out = "date,prob_extreme,label\n";
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        out += format_iso_date(filled.date_at(i));
        out += ',';
        out += format_double(smoothed[i][1]);
        out += ',';
        out += regime_label_name(labels[i]);
        out += '\n';
    }
    return out;
}

StationOutput process_station(const PipelineConfig& config, const StationInput& station,
                              std::size_t station_index) {
    StationOutput out;
    ordered_json& body = out.section;

    // -- ingest: load the raw station file and fill calendar gaps.
    TemperatureSeries filled;
    std::size_t missing_before = 0;
    try {
        LoadOptions options;
        options.station_id = station.id;
        const TemperatureSeries raw = load_station_csv(station.csv_resolved, options);
        missing_before = raw.missing_count();
        filled = fill_missing(raw, config.fill_window_days);
    } catch (...) {
        stage_fail("ingest", station.id,
                   "check the station CSV (date,tmax,tmin[,tavg]; strictly increasing dates; "
                   "at most 10% missing)");
    }
    const std::vector<double> temperatures = filled.complete_values();
    {
        const DescriptiveStats stats = descriptive_stats(temperatures);
        ordered_json d;
        d["operation"] = "descriptive_stats";
        d["count"] = stats.count;
        d["filled_missing"] = missing_before;
        d["mean"] = json_number(stats.mean);
        d["median"] = json_number(stats.median);
        d["mode"] = json_number(stats.mode);
        d["stddev"] = json_number(stats.stddev);
        d["min"] = json_number(stats.minimum);
        d["max"] = json_number(stats.maximum);
        d["skewness"] = json_number(stats.skewness);
        d["kurtosis"] = json_number(stats.kurtosis);
        body["descriptive"] = std::move(d);
    }

    // -- seasonal fit and removal.
    SeasonalParams seasonal;
    DeseasonalizedSeries core;
    try {
        const SeasonalFitRaw raw_fit = fit_seasonal(filled);
        seasonal = config.signed_phase ? to_amplitude_phase_signed(raw_fit)
                                       : to_amplitude_phase(raw_fit);
        core = deseasonalize(filled, seasonal, config.deseasonalize_mode);
        ordered_json s = seasonal_to_json(seasonal);
        s["operation"] = "least_squares_seasonal_fit";
        s["mode"] = mode_name(config.deseasonalize_mode);
        s["residual_sum_squares"] = json_number(raw_fit.residual_sum_squares);
        body["seasonality"] = std::move(s);
    } catch (...) {
        stage_fail("seasonal-fit", station.id,
                   "the series must span at least a few seasons for a stable fit");
    }

    // -- model-free diagnostics on the day-over-day changes.
    std::vector<double> steps;
    steps.reserve(core.values.size() - 1);
    for (std::size_t i = 1; i < core.values.size(); ++i)
        steps.push_back(core.values[i] - core.values[i - 1]);
    try {
        const DescriptiveStats sstats = descriptive_stats(steps);
        ordered_json diag;
        diag["operation"] = "step_change_test_battery";
        diag["step_mean"] = json_number(sstats.mean);
        diag["step_stddev"] = json_number(sstats.stddev);
        diag["step_skewness"] = json_number(sstats.skewness);
        diag["step_kurtosis"] = json_number(sstats.kurtosis);
        diag["jarque_bera"] = test_result_json(jarque_bera(steps));
        diag["pearson_chi2"] = test_result_json(pearson_chi2_normal(steps, config.chi2_bins));
        {
            double mean = 0.0;
            for (double v : steps)
                mean += v;
            mean /= double(steps.size());
            double var = 0.0;
            for (double v : steps)
                var += (v - mean) * (v - mean);
            const double sd = std::sqrt(var / double(steps.size()));
            const GHParams normal_fit = make_normal(mean, sd);
            diag["anderson_darling"] = test_result_json(anderson_darling(
                steps, [&](double x) { return cdf(normal_fit, x); }, true));
        }
        diag["engle_arch"] = test_result_json(engle_arch(steps, config.engle_lags));
        {
            const HurstResult hurst = hurst_rs(steps);
            diag["hurst"] = ordered_json{{"exponent", json_number(hurst.exponent)}};
        }
        body["residual_diagnostics"] = std::move(diag);
    } catch (...) {
        stage_fail("diagnostics", station.id,
                   "diagnostics need at least a few hundred days of data");
    }

    // -- regime calibration.
    EMResult em;
    std::vector<std::array<double, 2>> smoothed;
    std::vector<RegimeLabel> labels;
    try {
        EMConfig em_config = config.em;
        em_config.jitter_seed = config.seed ^ (0x9e3779b97f4a7c15ull * (station_index + 1));
        em = em_calibrate(core.values, initial_model(core.values, em_config.guard), em_config);
        FilterOptions filter_options;
        filter_options.guard = em_config.guard;
        FilterOutput fo = hamilton_filter(core.values, em.model,
                                          stationary_distribution(em.model.trans),
                                          filter_options);
        smoothed = kim_smooth(fo, em.model.trans);
        labels = classify_regimes(smoothed, config.regime_threshold);

        ordered_json fit = regime_model_to_json(em.model);
        fit["operation"] = "em_calibrate";
        fit["loglik"] = json_number(em.trace.back().loglik);
        fit["iterations"] = em.iterations;
        fit["converged"] = em.converged;
        fit["level_floor_count"] = em.level_floor_count;
        ordered_json trace = ordered_json::array();
        for (std::size_t i = 0; i < em.trace.size(); ++i)
            trace.push_back(json_number(em.trace[i].loglik));
        fit["loglik_trace"] = std::move(trace);
        body["tml_fit"] = std::move(fit);

        std::size_t extreme_days = 0;
        for (RegimeLabel label : labels)
            extreme_days += label == RegimeLabel::extreme ? 1 : 0;
        body["regimes"] = ordered_json{
            {"operation", "classify_regimes"},
            {"threshold", config.regime_threshold},
            {"extreme_days", extreme_days},
            {"extreme_fraction", json_number(double(extreme_days) / double(labels.size()))}};
    } catch (...) {
        stage_fail("regime-calibration", station.id,
                   "try more em.extra_starts or a looser em.tolerance");
    }

    // -- residual extraction and distribution fitting.
    std::vector<double> pooled;
    std::map<GHFamily, GHParams> fitted;
    try {
        const RegimeResiduals residuals =
            extract_regime_residuals(core.values, em.model, smoothed, config.em.guard);
        pooled = residuals.pooled;
        // Pure family->parameters map: the table renderer takes every key of
        // this section as a distribution column.
        ordered_json block;
        for (GHFamily family : config.families) {
            const FitResult fit = fit_mle(pooled, family);
            fitted.emplace(family, fit.params);
            ordered_json f = gh_params_to_json(fit.params);
            f.erase("family"); // redundant with the key
            f["loglik"] = json_number(fit.loglik);
            f["converged"] = fit.converged;
            block[family_name(family)] = std::move(f);
        }
        body["distribution_fits"] = std::move(block);
    } catch (...) {
        stage_fail("distribution-fit", station.id,
                   "fitting needs at least 50 non-constant residuals; consider fewer families");
    }

    // -- goodness of fit of every fitted family on the same residuals.
    try {
        std::vector<double> sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        ordered_json block; // pure family->tests map, same reason as the fits
        for (GHFamily family : config.families) {
            const GHParams& params = fitted.at(family);
            const std::vector<double> probs = cdf_sorted(params, sorted);
            // Exact lookup table for the test machinery: the tests evaluate
            // the cdf only at sample points, which are exactly `sorted`.
            const auto table_cdf = [&](double x) {
                const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
                if (it == sorted.end())
                    return probs.back();
                return probs[std::size_t(it - sorted.begin())];
            };
            TestResult ks = kolmogorov_smirnov(pooled, table_cdf);
            TestResult ad = anderson_darling(pooled, table_cdf, true);
            ordered_json g;
            g["kolmogorov_smirnov"] =
                json_number(ks.scaled_statistic ? *ks.scaled_statistic
                                                : ks.statistic * std::sqrt(double(n)));
            g["ks_p_value"] = ks.p_value ? json_number(*ks.p_value) : ordered_json(nullptr);
            g["anderson_darling"] = json_number(ad.statistic);
            g["ad_p_value"] = ad.p_value ? json_number(*ad.p_value) : ordered_json(nullptr);
            block[family_name(family)] = std::move(g);
        }
        body["distribution_gof"] = std::move(block);
    } catch (...) {
        stage_fail("goodness-of-fit", station.id,
                   "check that the fitted parameters are usable (see distribution_fits)");
    }

    // -- indices on the observed series, plus simulated distributions.
    try {
        SimulatedPaths paths;
        bool simulated = false;
        if (config.simulation) {
            SimulationSpec sim;
            sim.model = em.model;
            sim.seasonal = seasonal;
            sim.deseasonalize_mode = config.deseasonalize_mode;
            sim.n_days = config.simulation->n_days;
            sim.n_paths = config.simulation->n_paths;
            sim.seed = config.seed + 1000003ull * station_index;
            sim.initial_value = core.values.back();
            sim.guard = config.em.guard;
            if (config.simulation->innovation_family)
                sim.shifted_innovation = fitted.at(*config.simulation->innovation_family);
            paths = simulate_paths(sim);
            simulated = true;
        }

        ordered_json index_array = ordered_json::array();
        for (const IndexSpec& spec : config.indices) {
            ordered_json entry;
            entry["kind"] = index_kind_name(spec.kind);
            entry["tau1"] = spec.tau1;
            entry["tau2"] = spec.tau2;
            if (spec.t_optimal)
                entry["t_optimal"] = *spec.t_optimal;
            if (spec.tau2 < temperatures.size()) {
                entry["observed"] = json_number(index_value(temperatures, spec));
            } else {
                entry["observed"] = nullptr;
                entry["observed_note"] = "window extends beyond the observed series";
            }
            if (simulated) {
                if (spec.tau2 < config.simulation->n_days) {
                    const IndexDistribution dist = index_distribution(paths.temperature, spec);
                    ordered_json sim_summary;
                    sim_summary["mean"] = json_number(dist.mean);
                    sim_summary["stddev"] = json_number(dist.stddev);
                    ordered_json quantiles;
                    for (std::size_t q = 0; q < dist.quantile_levels.size(); ++q) {
                        char key[16];
                        std::snprintf(key, sizeof(key), "p%02d",
                                      int(std::lround(dist.quantile_levels[q] * 100.0)));
                        quantiles[key] = json_number(dist.quantiles[q]);
                    }
                    sim_summary["quantiles"] = std::move(quantiles);
                    entry["simulated"] = std::move(sim_summary);
                } else {
                    entry["simulated"] = nullptr;
                    entry["simulated_note"] = "window extends beyond the simulation horizon";
                }
            }
            index_array.push_back(std::move(entry));
        }
        ordered_json block;
        block["operation"] = "index_value+simulate_paths+index_distribution";
        block["values"] = std::move(index_array);
        body["indices"] = std::move(block);

        if (simulated)
            out.artifacts.emplace_back(station.id + "_paths.csv", paths_to_csv(paths));
    } catch (...) {
        stage_fail("indices", station.id,
                   "index windows are 0-based inclusive day offsets; check them against "
                   "series length and simulation.n_days");
    }

    // -- plot-ready artifacts.
    out.artifacts.emplace_back(station.id + "_series.csv", series_csv(filled, seasonal, core));
    out.artifacts.emplace_back(station.id + "_residuals.csv", residuals_csv(filled, pooled));
    out.artifacts.emplace_back(station.id + "_regimes.csv",
                               regimes_csv(filled, smoothed, labels));
    ordered_json names = ordered_json::array();
    for (const auto& [name, content] : out.artifacts)
        names.push_back(name);
    body["artifacts"] = std::move(names);
    return out;
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::filesystem::path& output_dir) {
    validate(config);

    const std::size_t n = config.stations.size();
    std::vector<StationOutput> outputs(n);
    std::vector<std::exception_ptr> failures(n);
    {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pool.emplace_back([&, i] {
                try {
                    outputs[i] = process_station(config, config.stations[i], i);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            });
        for (auto& th : pool)
            th.join();
    }
    // Surface the first failure in station order (not completion order) so
    // the reported error is deterministic.
    for (std::size_t i = 0; i < n; ++i)
        if (failures[i])
            std::rethrow_exception(failures[i]);

    PipelineResult result;
    ordered_json& report = result.report;
    report["provenance"] = ordered_json{{"config_hash", config_hash(config)},
                                        {"seed", config.seed},
                                        {"library_version", library_version}};
    report["config"] = config_snapshot(config);
    ordered_json stations;
    for (std::size_t i = 0; i < n; ++i)
        stations[config.stations[i].id] = std::move(outputs[i].section);
    report["stations"] = std::move(stations);

    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec)
        throw io_error("cannot create output directory " + output_dir.string() + ": " +
                       ec.message());
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [name, content] : outputs[i].artifacts) {
            write_text_file_atomic(output_dir / name, content);
            result.artifacts.push_back(name);
        }
    }
    write_text_file_atomic(output_dir / "report.json", report.dump(2) + "\n");
    result.artifacts.push_back("report.json");
    return result;
}

} // namespace tempdyn
