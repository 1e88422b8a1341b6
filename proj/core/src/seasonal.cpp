#include "tempdyn/seasonal.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "tempdyn/errors.hpp"

namespace tempdyn {

namespace {
constexpr double pi = 3.14159265358979323846;
constexpr double omega = 2.0 * pi / seasonal_period;
} // namespace

SeasonalFitRaw fit_seasonal(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 4)
        throw validation_error("fit_seasonal: need at least 4 observations, got " +
                               std::to_string(n));

    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i + 1);
        design(Eigen::Index(i), 0) = 1.0;
        design(Eigen::Index(i), 1) = t;
        design(Eigen::Index(i), 2) = std::sin(omega * t);
        design(Eigen::Index(i), 3) = std::cos(omega * t);
        y(Eigen::Index(i)) = values[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 4)
        throw validation_error("fit_seasonal: design matrix is rank deficient");
    const Eigen::Vector4d beta = qr.solve(y);

    SeasonalFitRaw raw;
    raw.a0 = beta(0);
    raw.a1 = beta(1);
    raw.a2 = beta(2);
    raw.a3 = beta(3);
    raw.residual_sum_squares = (y - design * beta).squaredNorm();
    return raw;
}

SeasonalFitRaw fit_seasonal(const TemperatureSeries& series) {
    return fit_seasonal(series.complete_values());
}

SeasonalParams to_amplitude_phase(const SeasonalFitRaw& raw) {
    SeasonalParams p;
    p.A0 = raw.a0;
    p.A1 = raw.a1;
    if (raw.a2 == 0.0 && raw.a3 == 0.0)
        return p;
    p.A2 = std::hypot(raw.a2, raw.a3);
    // a2 sin + a3 cos == A2 sin(omega (t - phi)) with omega phi = -atan2(a3, a2).
    double phi = -std::atan2(raw.a3, raw.a2) / omega;
    phi = std::fmod(phi, seasonal_period);
    if (phi < 0.0)
        phi += seasonal_period;
    p.phi = phi;
    return p;
}

SeasonalParams to_amplitude_phase_signed(const SeasonalFitRaw& raw) {
    SeasonalParams p;
    p.A0 = raw.a0;
    p.A1 = raw.a1;
    if (raw.a2 == 0.0 && raw.a3 == 0.0)
        return p;
    const double amp = std::hypot(raw.a2, raw.a3);
    double theta = std::atan2(raw.a3, raw.a2);
    if (raw.a2 < 0.0)
        theta += theta > 0.0 ? -pi : pi; // principal arctan branch of a3/a2
    p.A2 = raw.a2 < 0.0 ? -amp : amp;
    p.phi = -theta / omega;
    return p;
}

double seasonal_value(const SeasonalParams& params, double t) {
    return params.A0 + params.A1 * t + params.A2 * std::sin(omega * (t - params.phi));
}

DeseasonalizedSeries deseasonalize(const TemperatureSeries& series, const SeasonalParams& params,
                                   DeseasonalizeMode mode) {
    DeseasonalizedSeries out;
    out.station_id = series.station_id;
    out.start_date = series.start_date;
    out.mode = mode;
    const std::vector<double> values = series.complete_values();
    out.values.reserve(values.size());
    const double keep = mode == DeseasonalizeMode::sinusoid_only ? params.A0 : 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        out.values.push_back(values[i] - seasonal_value(params, double(i + 1)) + keep);
    return out;
}

TemperatureSeries reseasonalize(const DeseasonalizedSeries& series,
                                const SeasonalParams& params) {
    TemperatureSeries out;
    out.station_id = series.station_id;
    out.start_date = series.start_date;
    out.values.reserve(series.values.size());
    const double keep = series.mode == DeseasonalizeMode::sinusoid_only ? params.A0 : 0.0;
    for (std::size_t i = 0; i < series.values.size(); ++i)
        out.values.emplace_back(series.values[i] + seasonal_value(params, double(i + 1)) - keep);
    return out;
}

} // namespace tempdyn
