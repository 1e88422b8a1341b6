#pragma once

#include <vector>

#include "tempdyn/series.hpp"

namespace tempdyn {

// Days per seasonal cycle used throughout the model.
inline constexpr double seasonal_period = 365.0;

// Least-squares coefficients of
//   T(t) = a0 + a1 t + a2 sin(2 pi t / 365) + a3 cos(2 pi t / 365),  t = 1..N.
struct SeasonalFitRaw {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double residual_sum_squares = 0.0;
};

// Amplitude-phase form
//   S_d(t) = A0 + A1 t + A2 sin((2 pi / 365) (t - phi)).
struct SeasonalParams {
    double A0 = 0.0;
    double A1 = 0.0; // degC per day
    double A2 = 0.0; // amplitude, degC
    double phi = 0.0; // phase, days
};

// Ordinary least squares on the four-column design above; t starts at 1.
// Throws validation_error if the series is shorter than 4 or the design is
// rank deficient.
SeasonalFitRaw fit_seasonal(const std::vector<double>& values);
SeasonalFitRaw fit_seasonal(const TemperatureSeries& series); // requires complete

// Normalized conversion: A2 = hypot(a2, a3) >= 0 and phi in [0, 365) chosen
// so that A2 sin(omega (t - phi)) == a2 sin(omega t) + a3 cos(omega t)
// pointwise. a2 = a3 = 0 maps to A2 = 0, phi = 0.
SeasonalParams to_amplitude_phase(const SeasonalFitRaw& raw);

// Alternate convention kept for comparability with published tables: the
// phase comes from the single-argument arctangent (so phi is confined to
// (-365/4, 365/4]) and the amplitude carries the sign of a2. Reconstructs the
// same sinusoid exactly.
SeasonalParams to_amplitude_phase_signed(const SeasonalFitRaw& raw);

// S_d(t); works for either amplitude sign convention.
double seasonal_value(const SeasonalParams& params, double t);

// mode == full:          value - (A0 + A1 t + A2 sin(omega (t - phi)))
// mode == sinusoid_only: value - (     A1 t + A2 sin(omega (t - phi)))
// t = 1 at the first observation.
DeseasonalizedSeries deseasonalize(const TemperatureSeries& series, const SeasonalParams& params,
                                   DeseasonalizeMode mode);

// Exact inverse of deseasonalize for the mode recorded on the series.
TemperatureSeries reseasonalize(const DeseasonalizedSeries& series, const SeasonalParams& params);

} // namespace tempdyn
