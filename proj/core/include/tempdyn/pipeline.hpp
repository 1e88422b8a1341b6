#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tempdyn/ghdist.hpp"
#include "tempdyn/indices.hpp"
#include "tempdyn/regime.hpp"
#include "tempdyn/serialize.hpp"
#include "tempdyn/series.hpp"

namespace tempdyn {

struct StationInput {
    std::string id;                     // [A-Za-z0-9_-]+, used in artifact names
    std::string csv_spec;               // path exactly as written in the config
    std::filesystem::path csv_resolved; // csv_spec resolved against the config directory
};

struct SimulationSettings {
    std::size_t n_days = 365;
    std::size_t n_paths = 256;
    // Draw shifted-regime innovations from this family's fitted parameters
    // (must be in the fitted family list); absent = Gaussian innovations.
    std::optional<GHFamily> innovation_family;
};

// Analytic description of a full run. The output location is deliberately
// not part of the config (and therefore not part of the config hash): where
// artifacts land must not change what they contain.
struct PipelineConfig {
    std::vector<StationInput> stations;
    int fill_window_days = 7;
    DeseasonalizeMode deseasonalize_mode = DeseasonalizeMode::full;
    bool signed_phase = true; // amplitude-sign phase convention in reports
    EMConfig em;
    double regime_threshold = 0.8;
    std::vector<GHFamily> families = {GHFamily::normal, GHFamily::hyp, GHFamily::nig};
    int engle_lags = 12;
    int chi2_bins = 50;
    std::vector<IndexSpec> indices;
    std::optional<SimulationSettings> simulation;
    std::uint64_t seed = 0;
};

// Parses the documented JSON config shape; unknown keys are rejected so
// typos fail loudly. Station paths resolve against base_dir. The result is
// validated (see below).
PipelineConfig pipeline_config_from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& config_path);

// Range checks plus existence of every referenced input file; throws
// validation_error before any computation happens.
void validate(const PipelineConfig& config);

// Canonical JSON form of the config; equal configs produce byte-identical
// snapshots. This is what gets hashed and embedded in reports.
ordered_json config_snapshot(const PipelineConfig& config);

// FNV-1a 64-bit hash of the snapshot, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

struct PipelineResult {
    ordered_json report;
    std::vector<std::string> artifacts; // names relative to the output directory
};

// Runs every stage for every station (stations concurrently, stages in
// order): load and gap-fill, seasonal fit and removal, step-change
// diagnostics, regime calibration, residual distribution fitting, goodness
// of fit, indices and simulation; then writes all artifacts atomically into
// output_dir, report.json last, so an interrupted run never leaves a
// complete-looking report. Stage failures rethrow the underlying error type
// with the message prefixed "stage <name> (<station>)" and a remediation
// hint appended. The result is a pure function of (input files, config).
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::filesystem::path& output_dir);

} // namespace tempdyn
