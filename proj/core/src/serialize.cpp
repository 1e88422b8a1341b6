#include "tempdyn/serialize.hpp"

#include <cmath>

#include "tempdyn/errors.hpp"

namespace tempdyn {

ordered_json json_number(double v) {
    if (std::isfinite(v))
        return v;
    return nullptr;
}

double json_require_double(const nlohmann::json& j, const std::string& key,
                           const std::string& context) {
    if (!j.contains(key))
        throw validation_error(context + ": missing field '" + key + "'");
    const auto& field = j.at(key);
    if (!field.is_number())
        throw validation_error(context + ": field '" + key + "' is not a number");
    return field.get<double>();
}

ordered_json seasonal_to_json(const SeasonalParams& params) {
    ordered_json j;
    j["a0"] = json_number(params.A0);
    j["a1"] = json_number(params.A1);
    j["a2"] = json_number(params.A2);
    j["phi"] = json_number(params.phi);
    return j;
}

SeasonalParams seasonal_from_json(const nlohmann::json& j) {
    SeasonalParams p;
    p.A0 = json_require_double(j, "a0", "seasonal parameters");
    p.A1 = json_require_double(j, "a1", "seasonal parameters");
    p.A2 = json_require_double(j, "a2", "seasonal parameters");
    p.phi = json_require_double(j, "phi", "seasonal parameters");
    return p;
}

ordered_json regime_model_to_json(const RegimeModel& model) {
    ordered_json j;
    j["sigma_1"] = json_number(model.sigma_m);
    j["kappa"] = json_number(model.kappa);
    j["mu"] = json_number(model.mu_l);
    j["sigma_2"] = json_number(model.sigma_l);
    j["p11"] = json_number(model.trans.p11);
    j["p22"] = json_number(model.trans.p22);
    return j;
}

RegimeModel regime_model_from_json(const nlohmann::json& j) {
    RegimeModel m;
    m.sigma_m = json_require_double(j, "sigma_1", "regime model");
    m.kappa = json_require_double(j, "kappa", "regime model");
    m.mu_l = json_require_double(j, "mu", "regime model");
    m.sigma_l = json_require_double(j, "sigma_2", "regime model");
    m.trans = make_transition_matrix(json_require_double(j, "p11", "regime model"),
                                     json_require_double(j, "p22", "regime model"));
    validate(m);
    return m;
}

ordered_json gh_params_to_json(const GHParams& params) {
    ordered_json j;
    j["family"] = family_name(params.family);
    // Fields that do not parameterize the family are emitted as null so the
    // schema stays fixed across families.
    const bool normal = params.family == GHFamily::normal;
    j["nu"] = normal || params.family == GHFamily::nig || params.family == GHFamily::hyp
                  ? ordered_json(nullptr)
                  : json_number(params.nu);
    j["alpha"] = normal ? ordered_json(nullptr) : json_number(params.alpha);
    j["beta"] = normal ? ordered_json(nullptr) : json_number(params.beta);
    j["mu"] = json_number(params.mu);
    j["delta"] = json_number(params.delta);
    return j;
}

GHParams gh_params_from_json(const nlohmann::json& j) {
    if (!j.contains("family") || !j.at("family").is_string())
        throw validation_error("distribution parameters: missing 'family'");
    const GHFamily family = family_from_name(j.at("family").get<std::string>());
    const double mu = json_require_double(j, "mu", "distribution parameters");
    switch (family) {
    case GHFamily::normal:
        return make_normal(mu, json_require_double(j, "delta", "distribution parameters"));
    case GHFamily::nig:
        return make_nig(json_require_double(j, "alpha", "distribution parameters"),
                        json_require_double(j, "beta", "distribution parameters"), mu,
                        json_require_double(j, "delta", "distribution parameters"));
    case GHFamily::hyp:
        return make_hyp(json_require_double(j, "alpha", "distribution parameters"),
                        json_require_double(j, "beta", "distribution parameters"), mu,
                        json_require_double(j, "delta", "distribution parameters"));
    case GHFamily::vg:
        return make_vg(json_require_double(j, "nu", "distribution parameters"),
                       json_require_double(j, "alpha", "distribution parameters"),
                       json_require_double(j, "beta", "distribution parameters"), mu);
    case GHFamily::gh:
        break;
    }
    return make_gh(json_require_double(j, "nu", "distribution parameters"),
                   json_require_double(j, "alpha", "distribution parameters"),
                   json_require_double(j, "beta", "distribution parameters"), mu,
                   json_require_double(j, "delta", "distribution parameters"));
}

} // namespace tempdyn
