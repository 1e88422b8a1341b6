#include "tempdyn/simulate.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "tempdyn/csv.hpp"
#include "tempdyn/errors.hpp"
#include "tempdyn/rng.hpp"

namespace tempdyn {

namespace {

void check_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw validation_error(std::string("simulation spec: ") + name + " must be finite");
}

// One path, written straight into the preallocated output rows. The path's
// randomness comes entirely from its own substream, so paths are independent
// of each other and of how many there are.
void run_path(const SimulationSpec& spec, const std::array<double, 2>& initial_probs,
              const std::optional<GHParams>& innovation, std::size_t path,
              std::vector<double>& t_tilde, std::vector<double>& temperature,
              std::vector<std::uint8_t>& regimes) {
    Rng rng = Rng::substream(spec.seed, std::uint64_t(path));
    const RegimeModel& m = spec.model;
    const double keep =
        spec.deseasonalize_mode == DeseasonalizeMode::sinusoid_only ? spec.seasonal.A0 : 0.0;

    int state = rng.uniform() < initial_probs[0] ? 0 : 1;
    t_tilde[0] = spec.initial_value;
    regimes[0] = std::uint8_t(state);
    temperature[0] = t_tilde[0] + seasonal_value(spec.seasonal, 1.0) - keep;

    for (std::size_t t = 1; t < spec.n_days; ++t) {
        const double stay = state == 0 ? m.trans.p11 : m.trans.p22;
        if (rng.uniform() >= stay)
            state = 1 - state;
        const double prev = t_tilde[t - 1];
        double next;
        if (state == 0) {
            const double lvl = guarded_level(prev, spec.guard);
            next = (1.0 + m.kappa) * prev + m.sigma_m * lvl * rng.normal();
        } else {
            const double eps = innovation ? sample_one(*innovation, rng) : rng.normal();
            next = prev + m.mu_l + m.sigma_l * eps;
        }
        t_tilde[t] = next;
        regimes[t] = std::uint8_t(state);
        temperature[t] = next + seasonal_value(spec.seasonal, double(t + 1)) - keep;
    }
}

} // namespace

void validate(const SimulationSpec& spec) {
    if (spec.n_days < 1)
        throw validation_error("simulation spec: n_days must be at least 1");
    if (spec.n_paths < 1)
        throw validation_error("simulation spec: n_paths must be at least 1");
    check_finite(spec.model.kappa, "kappa");
    check_finite(spec.model.sigma_m, "sigma_m");
    check_finite(spec.model.mu_l, "mu_l");
    check_finite(spec.model.sigma_l, "sigma_l");
    check_finite(spec.initial_value, "initial_value");
    check_finite(spec.seasonal.A0, "seasonal A0");
    check_finite(spec.seasonal.A1, "seasonal A1");
    check_finite(spec.seasonal.A2, "seasonal A2");
    check_finite(spec.seasonal.phi, "seasonal phi");
    if (spec.model.sigma_m < 0.0)
        throw validation_error("simulation spec: sigma_m must be nonnegative");
    if (spec.model.sigma_l < 0.0)
        throw validation_error("simulation spec: sigma_l must be nonnegative");
    validate(spec.model.trans);
    if (!(spec.guard.epsilon > 0.0))
        throw validation_error("simulation spec: level floor must be positive");
    if (std::fabs(1.0 + spec.model.kappa) >= 1.0 && !spec.allow_unstable)
        throw validation_error(
            "simulation spec: |1 + kappa| = " + std::to_string(std::fabs(1.0 + spec.model.kappa)) +
            " >= 1 gives a non-contracting base regime; set allow_unstable to simulate anyway");
    if (spec.shifted_innovation)
        validate(*spec.shifted_innovation);
}

SimulatedPaths simulate_paths(const SimulationSpec& spec) {
    validate(spec);
    const std::array<double, 2> initial_probs = stationary_distribution(spec.model.trans);
    std::optional<GHParams> innovation;
    if (spec.shifted_innovation)
        innovation = standardize(*spec.shifted_innovation);

    SimulatedPaths out;
    out.t_tilde.assign(spec.n_paths, std::vector<double>(spec.n_days, 0.0));
    out.temperature.assign(spec.n_paths, std::vector<double>(spec.n_days, 0.0));
    out.regimes.assign(spec.n_paths, std::vector<std::uint8_t>(spec.n_days, 0));

    const auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t p = begin; p < spec.n_paths; p += stride)
            run_path(spec, initial_probs, innovation, p, out.t_tilde[p], out.temperature[p],
                     out.regimes[p]);
    };

    std::size_t workers = std::thread::hardware_concurrency();
    if (workers > spec.n_paths)
        workers = spec.n_paths;
    if (workers <= 1 || spec.n_paths < 4) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run_range, w, workers);
        for (auto& th : pool)
            th.join();
    }
    return out;
}

std::string paths_to_csv(const SimulatedPaths& paths) {
    std::string out = "path_id,day,regime,t_tilde,temperature\n";
    for (std::size_t p = 0; p < paths.t_tilde.size(); ++p) {
        for (std::size_t t = 0; t < paths.t_tilde[p].size(); ++t) {
            out += std::to_string(p);
            out += ',';
            out += std::to_string(t + 1);
            out += ',';
            out += std::to_string(int(paths.regimes[p][t]));
            out += ',';
            out += format_double(paths.t_tilde[p][t]);
            out += ',';
            out += format_double(paths.temperature[p][t]);
            out += '\n';
        }
    }
    return out;
}

} // namespace tempdyn
