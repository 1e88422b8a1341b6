#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tempdyn/ghdist.hpp"

namespace tempdyn {

// Two-state Markov transition matrix; rows (the from-state) sum to one.
// State 0 is the base regime, state 1 the shifted regime.
struct TransitionMatrix {
    double p11 = 0.95, p12 = 0.05;
    double p21 = 0.05, p22 = 0.95;
};

// Builds a matrix from the two stay probabilities with exact row sums.
TransitionMatrix make_transition_matrix(double stay_base, double stay_shifted);
void validate(const TransitionMatrix& trans);

// Long-run occupancy (pi P = pi). For the identity matrix every distribution
// is stationary; (1/2, 1/2) is returned by convention.
std::array<double, 2> stationary_distribution(const TransitionMatrix& trans);

// Two-regime model of a deseasonalized daily series T:
//   base regime     T_t = (1 + kappa) T_{t-1} + sigma_m * T_{t-1} * eps_t
//   shifted regime  T_t = T_{t-1} + mu_l + sigma_l * eps_t
// with standard-normal innovations eps_t inside the filter and M-steps.
struct RegimeModel {
    double kappa = 0.0;   // base-regime mean-reversion coefficient (1/day)
    double sigma_m = 0.1; // base-regime volatility multiplying the level (1/sqrt(day))
    double mu_l = 0.0;    // shifted-regime drift (deg C/day)
    double sigma_l = 1.0; // shifted-regime volatility (deg C/sqrt(day))
    TransitionMatrix trans;
};

void validate(const RegimeModel& model);

// The base-regime conditional standard deviation is sigma_m * |T_{t-1}|,
// which degenerates as the level approaches zero. Levels at or below
// `epsilon` are floored to it by default (each occurrence counted) or
// rejected. The floor is part of the implemented model: density evaluation,
// M-steps, residual extraction, and path simulation all apply it
// identically, so calibration and simulation describe the same process.
struct LevelGuard {
    bool error_on_degenerate = false;
    double epsilon = 1e-6;
};

// |level| with the guard applied; increments *floor_count when flooring.
double guarded_level(double level, const LevelGuard& guard, std::size_t* floor_count = nullptr);

// Conditional one-step densities of the two regimes. The base-regime mean
// uses the signed previous level; only the standard deviation is guarded.
double log_base_density(double kappa, double sigma_m, double t_prev, double t_now,
                        const LevelGuard& guard = {}, std::size_t* floor_count = nullptr);
double base_density(double kappa, double sigma_m, double t_prev, double t_now,
                    const LevelGuard& guard = {}, std::size_t* floor_count = nullptr);
double log_shifted_density(double mu_l, double sigma_l, double t_prev, double t_now);
double shifted_density(double mu_l, double sigma_l, double t_prev, double t_now);

struct FilterOutput {
    std::vector<std::array<double, 2>> predicted; // P(S_t | F_{t-1}); entry 0 is the initial distribution
    std::vector<std::array<double, 2>> filtered;  // P(S_t | F_t)
    std::vector<std::array<double, 2>> smoothed;  // P(S_t | F_N); filled by kim_smooth
    double loglik = 0.0;                          // sum of per-step predictive log densities
    std::size_t level_floor_count = 0;
};

struct FilterOptions {
    LevelGuard guard;
    // When set, the shifted-regime innovation follows this distribution
    // (standardized internally to mean zero and unit variance, then scaled
    // by sigma_l) instead of the Gaussian. Evaluation-only: the EM M-steps
    // remain Gaussian.
    std::optional<GHParams> shifted_innovation;
};

// Forward filtering in log space. The first observation is the conditioning
// start and is not scored; the log-likelihood sums the N-1 predictive log
// densities of the remaining days.
FilterOutput hamilton_filter(const std::vector<double>& series, const RegimeModel& model,
                             std::array<double, 2> init_probs, const FilterOptions& options = {});

// Backward smoothing pass; returns P(S_t | F_N) for every day.
std::vector<std::array<double, 2>> kim_smooth(const FilterOutput& filter_out,
                                              const TransitionMatrix& trans);

struct BaseRegimeEstimate {
    double kappa = 0.0;
    double sigma_m = 0.0;
};
struct ShiftedRegimeEstimate {
    double mu_l = 0.0;
    double sigma_l = 0.0;
};

// Closed-form weighted maximum-likelihood updates. Weights are the smoothed
// probabilities of the respective regime (column 0 for base, 1 for shifted).
// The base update works on level-standardized quantities so it coincides
// with the guarded density; without any flooring it reduces to the plain
// weighted regression of relative increments on the previous level.
BaseRegimeEstimate m_step_base(const std::vector<double>& series,
                               const std::vector<std::array<double, 2>>& smoothed,
                               const LevelGuard& guard = {});
ShiftedRegimeEstimate m_step_shifted(const std::vector<double>& series,
                                     const std::vector<std::array<double, 2>>& smoothed);

// Expected-transition-count re-estimation from a smoothed filter pass; rows
// of the result sum to one exactly.
TransitionMatrix update_transitions(const FilterOutput& filter_out, const TransitionMatrix& trans);

struct EMConfig {
    double tolerance = 1e-6; // absolute log-likelihood change for convergence
    int max_iterations = 500;
    LevelGuard guard;
    int extra_starts = 0; // additional runs from jittered initializations
    std::uint64_t jitter_seed = 0;
    // Day-one regime distribution for every filter pass. Defaults to the
    // stationary distribution of the starting transition matrix; it is held
    // fixed across iterations so each pass scores the same objective.
    std::optional<std::array<double, 2>> initial_probabilities;
};

struct EMTracePoint {
    RegimeModel model;
    double loglik = 0.0;
};

struct EMResult {
    RegimeModel model;               // parameters of the best scored iteration
    std::vector<EMTracePoint> trace; // per-iteration parameters and their log-likelihood
    bool converged = false;
    int iterations = 0;
    std::size_t level_floor_count = 0; // from the final filter pass
};

// Moment-based starting point: regression through the origin of T_t on
// T_{t-1} for the base regime, increment mean/std for the shifted one, and
// mildly persistent transitions.
RegimeModel initial_model(const std::vector<double>& series, const LevelGuard& guard = {});

// Expectation-maximization calibration. The initial regime distribution is
// frozen at the stationary distribution of the initial transition matrix for
// the whole run, which keeps the likelihood non-decreasing across
// iterations (checked with 1e-8 slack; violations raise an error).
EMResult em_calibrate(const std::vector<double>& series, const RegimeModel& init,
                      const EMConfig& config = {});

enum class RegimeLabel { normal, extreme };
const char* regime_label_name(RegimeLabel label);

// A day is labeled extreme when its smoothed shifted-regime probability
// strictly exceeds the threshold.
std::vector<RegimeLabel> classify_regimes(const std::vector<std::array<double, 2>>& smoothed,
                                          double threshold = 0.8);

struct WeightedResidual {
    double value = 0.0;
    double weight = 0.0;
};

struct RegimeResiduals {
    // Standardized one-step residuals under each regime's dynamics, one per
    // transition, each carrying the smoothed probability of that regime.
    std::vector<WeightedResidual> base;
    std::vector<WeightedResidual> shifted;
    // Unstandardized residual against the posterior-mean one-step
    // prediction, for whole-series distribution fitting.
    std::vector<double> pooled;
};

RegimeResiduals extract_regime_residuals(const std::vector<double>& series, const RegimeModel& model,
                                         const std::vector<std::array<double, 2>>& smoothed,
                                         const LevelGuard& guard = {});

} // namespace tempdyn
