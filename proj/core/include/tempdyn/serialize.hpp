#pragma once

#include <nlohmann/json.hpp>

#include "tempdyn/ghdist.hpp"
#include "tempdyn/regime.hpp"
#include "tempdyn/seasonal.hpp"

namespace tempdyn {

// Key-order-preserving JSON is used for everything we emit so that identical
// inputs serialize identically, byte for byte.
using ordered_json = nlohmann::ordered_json;

// A JSON number that keeps the report schema valid under bad numerics:
// finite values pass through, anything else becomes null.
ordered_json json_number(double v);

ordered_json seasonal_to_json(const SeasonalParams& params);
SeasonalParams seasonal_from_json(const nlohmann::json& j);

// Keys sigma_1, kappa, mu, sigma_2, p11, p22 (the published parameter order
// for this model family).
ordered_json regime_model_to_json(const RegimeModel& model);
RegimeModel regime_model_from_json(const nlohmann::json& j);

ordered_json gh_params_to_json(const GHParams& params);
GHParams gh_params_from_json(const nlohmann::json& j);

// Strict field access: throws validation_error naming `key` (and `context`)
// when absent or non-numeric.
double json_require_double(const nlohmann::json& j, const std::string& key,
                           const std::string& context);

} // namespace tempdyn
