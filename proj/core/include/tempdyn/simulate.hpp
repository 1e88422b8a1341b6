#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tempdyn/ghdist.hpp"
#include "tempdyn/regime.hpp"
#include "tempdyn/seasonal.hpp"
#include "tempdyn/series.hpp"

namespace tempdyn {

// Monte Carlo specification for the two-regime daily temperature model.
// Each path starts from initial_value on the deseasonalized scale; the
// regime chain starts from the stationary distribution of the transition
// matrix; temperature is recomposed by adding back the seasonal component
// under deseasonalize_mode (the exact inverse of the decomposition).
struct SimulationSpec {
    RegimeModel model;
    SeasonalParams seasonal;
    DeseasonalizeMode deseasonalize_mode = DeseasonalizeMode::full;
    // When set, shifted-regime innovations are drawn from this distribution
    // after standardization to zero mean and unit variance, so sigma_l keeps
    // its role as the regime's volatility scale. Base-regime innovations are
    // always Gaussian.
    std::optional<GHParams> shifted_innovation;
    std::size_t n_days = 0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double initial_value = 0.0; // deseasonalized scale
    // The base regime contracts toward zero only when |1 + kappa| < 1;
    // simulating an expanding recursion must be requested explicitly.
    bool allow_unstable = false;
    LevelGuard guard; // floor for the level-proportional noise scale
};

// Throws validation_error naming the violated requirement. Unlike the
// calibration-side model check, zero volatilities are legal here (they give
// deterministic paths).
void validate(const SimulationSpec& spec);

// Row-per-path output; all rows have n_days entries.
struct SimulatedPaths {
    std::vector<std::vector<double>> t_tilde;        // deseasonalized level
    std::vector<std::vector<double>> temperature;    // recomposed
    std::vector<std::vector<std::uint8_t>> regimes;  // 0 = base, 1 = shifted
};

// Deterministic given spec.seed. Every path draws from its own substream
// of the seed, so enlarging n_paths reproduces the existing paths bit for
// bit and appends new ones; paths are generated concurrently when the
// hardware allows. Throws validation_error via validate(spec).
SimulatedPaths simulate_paths(const SimulationSpec& spec);

// CSV with header `path_id,day,regime,t_tilde,temperature`; day is 1-based,
// regime is 0 (base) or 1 (shifted). Rows ordered by path then day.
std::string paths_to_csv(const SimulatedPaths& paths);

} // namespace tempdyn
