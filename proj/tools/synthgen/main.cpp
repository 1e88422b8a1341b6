// synthgen: deterministic generator for the synthetic station files under
// data/golden/. The committed CSVs were produced by this tool; it exists so
// the dataset's provenance is inspectable and regenerable. Regeneration is
// only byte-identical while the simulator's draw order is unchanged, which
// is why the files are committed rather than built on the fly.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "tempdyn/csv.hpp"
#include "tempdyn/dates.hpp"
#include "tempdyn/ghdist.hpp"
#include "tempdyn/regime.hpp"
#include "tempdyn/rng.hpp"
#include "tempdyn/seasonal.hpp"
#include "tempdyn/simulate.hpp"

using namespace tempdyn;

namespace {

struct StationRecipe {
    std::string id;
    SeasonalParams seasonal;
    RegimeModel model;
    std::optional<GHParams> shifted_innovation;
    double initial_value = 0.0;
    std::uint64_t seed = 0;
};

double round1(double v) { return std::round(v * 10.0) / 10.0; }

void generate(const StationRecipe& recipe, std::size_t n_days,
              const std::filesystem::path& out_dir) {
    SimulationSpec spec;
    spec.model = recipe.model;
    spec.seasonal = recipe.seasonal;
    spec.deseasonalize_mode = DeseasonalizeMode::sinusoid_only;
    spec.shifted_innovation = recipe.shifted_innovation;
    spec.n_days = n_days;
    spec.n_paths = 1;
    spec.seed = recipe.seed;
    spec.initial_value = recipe.initial_value;
    const std::vector<double> temperature = simulate_paths(spec).temperature[0];

    // Daily max/min around the average with a slowly varying, jittered
    // spread, both rounded to thermometer precision.
    Rng rng = Rng::substream(recipe.seed, 0xD15'FACEull);
    std::vector<double> tmax(n_days), tmin(n_days);
    for (std::size_t t = 0; t < n_days; ++t) {
        const double spread =
            7.5 + 2.5 * std::sin(2.0 * M_PI * double(t) / 23.0) + rng.uniform();
        tmax[t] = round1(temperature[t] + spread / 2.0);
        tmin[t] = round1(temperature[t] - spread / 2.0);
    }

    // Punch short calendar gaps (the raw-data reality the filler exists
    // for), only after the first full year so every gap has a prior-year
    // same-day observation to fall back on.
    std::set<std::size_t> missing;
    for (int gap = 0; gap < 12; ++gap) {
        const std::size_t start =
            385 + std::size_t(rng.uniform() * double(n_days - 420));
        const std::size_t length = 1 + std::size_t(rng.uniform() * 3.0);
        for (std::size_t d = start; d < start + length && d < n_days; ++d)
            missing.insert(d);
    }

    const civil_date start_date = parse_iso_date("2019-01-01");
    std::string csv = "date,tmax,tmin\n";
    for (std::size_t t = 0; t < n_days; ++t) {
        if (missing.count(t))
            continue; // a skipped row = a calendar gap in the raw file
        csv += format_iso_date(add_days(start_date, std::int64_t(t)));
        csv += ',';
        csv += format_double(tmax[t]);
        csv += ',';
        csv += format_double(tmin[t]);
        csv += '\n';
    }
    const std::filesystem::path path = out_dir / (recipe.id + ".csv");
    write_text_file_atomic(path, csv);
    std::cout << "wrote " << path.string() << " (" << n_days - missing.size() << " rows, "
              << missing.size() << " missing days)\n";
}

} // namespace

int main(int argc, char** argv) {
    // usage: synthgen [out_dir] [harbor_seed plateau_seed]
    const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data/golden";
    std::filesystem::create_directories(out_dir);

    // Generator conditioning matters more than realism here. The
    // level-proportional base noise is only identifiable when the series
    // level stays well away from zero, so the data is built on the
    // sinusoid-only decomposition: the deseasonalized level holds a working
    // point set by the balance between the base regime's slow decay
    // (kappa * level per base day) and the shifted regime's drift pump
    // (mu_l per shifted day), i.e. level* ~ pi_shifted*mu_l / (|kappa|*pi_base).
    // Too small a |kappa| lets the level random-walk across decades; too big
    // a drift shifts the mean enough that re-centering breaks the fit. The
    // values below were screened so that the calibration on the rounded,
    // gap-filled output recovers a contracting base regime.
    StationRecipe harbor;
    harbor.id = "harbor";
    harbor.seasonal = {26.8, 2.0e-5, 3.2, 105.0};
    harbor.model.kappa = -0.012;
    harbor.model.sigma_m = 0.040;
    harbor.model.mu_l = 1.0;
    harbor.model.sigma_l = 1.4;
    harbor.model.trans = make_transition_matrix(0.95, 0.85);
    harbor.shifted_innovation = make_nig(1.4, 0.5, 0.0, 1.0);
    harbor.initial_value = 28.0;
    harbor.seed = 8101;

    StationRecipe plateau;
    plateau.id = "plateau";
    plateau.seasonal = {24.1, -1.5e-5, 5.6, 12.0};
    plateau.model.kappa = -0.020;
    plateau.model.sigma_m = 0.035;
    plateau.model.mu_l = 1.26;
    plateau.model.sigma_l = 1.3;
    plateau.model.trans = make_transition_matrix(0.95, 0.80);
    plateau.initial_value = 25.0;
    plateau.seed = 8102;

    if (argc > 3) {
        harbor.seed = std::stoull(argv[2]);
        plateau.seed = std::stoull(argv[3]);
    }

    generate(harbor, 1150, out_dir);
    generate(plateau, 1150, out_dir);
    return 0;
}
