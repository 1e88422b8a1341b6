#include "tempdyn/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tempdyn/errors.hpp"
#include "tempdyn/rng.hpp"

namespace tempdyn {

namespace {

constexpr double half_log_two_pi = 0.9189385332046727;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void check_series(const std::vector<double>& series, const char* who) {
    if (series.size() < 2)
        throw validation_error(std::string(who) + ": need at least 2 observations, got " +
                               std::to_string(series.size()));
    for (std::size_t i = 0; i < series.size(); ++i)
        if (!std::isfinite(series[i]))
            throw validation_error(std::string(who) + ": non-finite value at index " +
                                   std::to_string(i));
}

void check_smoothed_size(const std::vector<double>& series,
                         const std::vector<std::array<double, 2>>& smoothed, const char* who) {
    if (smoothed.size() != series.size())
        throw validation_error(std::string(who) + ": weight count " +
                               std::to_string(smoothed.size()) + " does not match series length " +
                               std::to_string(series.size()));
}

} // namespace

TransitionMatrix make_transition_matrix(double stay_base, double stay_shifted) {
    TransitionMatrix t;
    t.p11 = stay_base;
    t.p12 = 1.0 - stay_base;
    t.p22 = stay_shifted;
    t.p21 = 1.0 - stay_shifted;
    validate(t);
    return t;
}

void validate(const TransitionMatrix& trans) {
    for (double p : {trans.p11, trans.p12, trans.p21, trans.p22})
        if (!(p >= 0.0 && p <= 1.0))
            throw validation_error("transition matrix: entries must lie in [0, 1]");
    if (std::fabs(trans.p11 + trans.p12 - 1.0) > 1e-12)
        throw validation_error("transition matrix: first row must sum to 1");
    if (std::fabs(trans.p21 + trans.p22 - 1.0) > 1e-12)
        throw validation_error("transition matrix: second row must sum to 1");
}

std::array<double, 2> stationary_distribution(const TransitionMatrix& trans) {
    validate(trans);
    const double denom = trans.p12 + trans.p21;
    if (denom <= 0.0)
        return {0.5, 0.5};
    return {trans.p21 / denom, trans.p12 / denom};
}

void validate(const RegimeModel& model) {
    if (!std::isfinite(model.kappa))
        throw validation_error("regime model: kappa must be finite");
    if (!(model.sigma_m > 0.0) || !std::isfinite(model.sigma_m))
        throw validation_error("regime model: sigma_m must be positive and finite");
    if (!std::isfinite(model.mu_l))
        throw validation_error("regime model: mu_l must be finite");
    if (!(model.sigma_l > 0.0) || !std::isfinite(model.sigma_l))
        throw validation_error("regime model: sigma_l must be positive and finite");
    validate(model.trans);
}

double guarded_level(double level, const LevelGuard& guard, std::size_t* floor_count) {
    const double a = std::fabs(level);
    if (a > guard.epsilon)
        return a;
    if (guard.error_on_degenerate)
        throw validation_error("regime: level magnitude " + std::to_string(a) +
                               " is at or below the degeneracy guard " +
                               std::to_string(guard.epsilon));
    if (floor_count)
        ++*floor_count;
    return guard.epsilon;
}

double log_base_density(double kappa, double sigma_m, double t_prev, double t_now,
                        const LevelGuard& guard, std::size_t* floor_count) {
    if (!(sigma_m > 0.0))
        throw validation_error("base density: sigma_m must be positive");
    const double sd = sigma_m * guarded_level(t_prev, guard, floor_count);
    const double z = (t_now - (1.0 + kappa) * t_prev) / sd;
    return -0.5 * z * z - std::log(sd) - half_log_two_pi;
}

double base_density(double kappa, double sigma_m, double t_prev, double t_now,
                    const LevelGuard& guard, std::size_t* floor_count) {
    return std::exp(log_base_density(kappa, sigma_m, t_prev, t_now, guard, floor_count));
}

double log_shifted_density(double mu_l, double sigma_l, double t_prev, double t_now) {
    if (!(sigma_l > 0.0))
        throw validation_error("shifted density: sigma_l must be positive");
    const double z = (t_now - t_prev - mu_l) / sigma_l;
    return -0.5 * z * z - std::log(sigma_l) - half_log_two_pi;
}

double shifted_density(double mu_l, double sigma_l, double t_prev, double t_now) {
    return std::exp(log_shifted_density(mu_l, sigma_l, t_prev, t_now));
}

FilterOutput hamilton_filter(const std::vector<double>& series, const RegimeModel& model,
                             std::array<double, 2> init_probs, const FilterOptions& options) {
    check_series(series, "hamilton_filter");
    validate(model);
    if (!(init_probs[0] >= 0.0) || !(init_probs[1] >= 0.0) ||
        !(init_probs[0] + init_probs[1] > 0.0))
        throw validation_error("hamilton_filter: initial probabilities must be non-negative "
                               "with positive sum");
    const double init_sum = init_probs[0] + init_probs[1];
    init_probs[0] /= init_sum;
    init_probs[1] /= init_sum;

    std::optional<GHParams> innovation;
    if (options.shifted_innovation)
        innovation = standardize(*options.shifted_innovation);
    const double log_sigma_l = std::log(model.sigma_l);

    const std::size_t n = series.size();
    FilterOutput out;
    out.predicted.resize(n);
    out.filtered.resize(n);
    out.predicted[0] = init_probs;
    out.filtered[0] = init_probs;

    for (std::size_t t = 1; t < n; ++t) {
        const double f0 = out.filtered[t - 1][0];
        const double f1 = out.filtered[t - 1][1];
        const double pred0 = f0 * model.trans.p11 + f1 * model.trans.p21;
        const double pred1 = f0 * model.trans.p12 + f1 * model.trans.p22;
        out.predicted[t] = {pred0, pred1};

        const double lb = log_base_density(model.kappa, model.sigma_m, series[t - 1], series[t],
                                           options.guard, &out.level_floor_count);
        double ls;
        if (innovation) {
            const double z = (series[t] - series[t - 1] - model.mu_l) / model.sigma_l;
            ls = log_pdf(*innovation, z) - log_sigma_l;
        } else {
            ls = log_shifted_density(model.mu_l, model.sigma_l, series[t - 1], series[t]);
        }
        if (std::isinf(ls) && ls > 0.0)
            throw numeric_error("hamilton_filter: unbounded shifted-regime density at day " +
                                std::to_string(t + 1));

        const double a0 = pred0 > 0.0 ? lb + std::log(pred0) : neg_inf;
        const double a1 = pred1 > 0.0 ? ls + std::log(pred1) : neg_inf;
        const double m = std::max(a0, a1);
        if (!std::isfinite(m))
            throw numeric_error("hamilton_filter: zero total likelihood at day " +
                                std::to_string(t + 1));
        const double logf = m + std::log(std::exp(a0 - m) + std::exp(a1 - m));
        double g0 = std::exp(a0 - logf);
        double g1 = std::exp(a1 - logf);
        const double gsum = g0 + g1;
        out.filtered[t] = {g0 / gsum, g1 / gsum};
        out.loglik += logf;
    }
    return out;
}

std::vector<std::array<double, 2>> kim_smooth(const FilterOutput& filter_out,
                                              const TransitionMatrix& trans) {
    validate(trans);
    const auto& filt = filter_out.filtered;
    const auto& pred = filter_out.predicted;
    if (filt.empty() || filt.size() != pred.size())
        throw validation_error("kim_smooth: filter output is incomplete");

    const std::size_t n = filt.size();
    std::vector<std::array<double, 2>> smoothed(n);
    smoothed[n - 1] = filt[n - 1];
    const double P[2][2] = {{trans.p11, trans.p12}, {trans.p21, trans.p22}};

    for (std::size_t t = n - 1; t-- > 0;) {
        double ratio[2];
        for (int j = 0; j < 2; ++j) {
            if (pred[t + 1][j] > 0.0) {
                ratio[j] = smoothed[t + 1][j] / pred[t + 1][j];
            } else if (smoothed[t + 1][j] <= 0.0) {
                ratio[j] = 0.0;
            } else {
                throw numeric_error("kim_smooth: zero predicted probability for regime " +
                                    std::to_string(j + 1) + " at day " + std::to_string(t + 2));
            }
        }
        double v0 = filt[t][0] * (P[0][0] * ratio[0] + P[0][1] * ratio[1]);
        double v1 = filt[t][1] * (P[1][0] * ratio[0] + P[1][1] * ratio[1]);
        const double s = v0 + v1;
        if (!(s > 0.0))
            throw numeric_error("kim_smooth: smoothed probabilities vanished at day " +
                                std::to_string(t + 1));
        smoothed[t] = {v0 / s, v1 / s};
    }
    return smoothed;
}

BaseRegimeEstimate m_step_base(const std::vector<double>& series,
                               const std::vector<std::array<double, 2>>& smoothed,
                               const LevelGuard& guard) {
    check_series(series, "m_step_base");
    check_smoothed_size(series, smoothed, "m_step_base");

    double sw = 0.0, sxx = 0.0, sxd = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double w = smoothed[t][0];
        if (w < 0.0)
            throw validation_error("m_step_base: negative weight at index " + std::to_string(t));
        if (w == 0.0)
            continue;
        const double lvl = guarded_level(series[t - 1], guard);
        const double x = series[t - 1] / lvl; // +-1 unless the level was floored
        const double d = (series[t] - series[t - 1]) / lvl;
        sw += w;
        sxx += w * x * x;
        sxd += w * x * d;
    }
    if (!(sw > 0.0))
        throw numeric_error("m_step_base: regime collapse, total base-regime weight is zero");
    if (!(sxx > 0.0))
        throw numeric_error("m_step_base: degenerate levels leave the base update undefined");

    BaseRegimeEstimate est;
    est.kappa = sxd / sxx;
    double srr = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double w = smoothed[t][0];
        if (w == 0.0)
            continue;
        const double lvl = guarded_level(series[t - 1], guard);
        const double r = (series[t] - (1.0 + est.kappa) * series[t - 1]) / lvl;
        srr += w * r * r;
    }
    est.sigma_m = std::sqrt(srr / sw);
    return est;
}

ShiftedRegimeEstimate m_step_shifted(const std::vector<double>& series,
                                     const std::vector<std::array<double, 2>>& smoothed) {
    check_series(series, "m_step_shifted");
    check_smoothed_size(series, smoothed, "m_step_shifted");

    double sw = 0.0, sd = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double w = smoothed[t][1];
        if (w < 0.0)
            throw validation_error("m_step_shifted: negative weight at index " +
                                   std::to_string(t));
        sw += w;
        sd += w * (series[t] - series[t - 1]);
    }
    if (!(sw > 0.0))
        throw numeric_error("m_step_shifted: regime collapse, total shifted-regime weight is "
                            "zero");

    ShiftedRegimeEstimate est;
    est.mu_l = sd / sw;
    double srr = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double w = smoothed[t][1];
        const double r = series[t] - series[t - 1] - est.mu_l;
        srr += w * r * r;
    }
    est.sigma_l = std::sqrt(srr / sw);
    return est;
}

TransitionMatrix update_transitions(const FilterOutput& filter_out, const TransitionMatrix& trans) {
    validate(trans);
    const auto& filt = filter_out.filtered;
    const auto& pred = filter_out.predicted;
    const auto& sm = filter_out.smoothed;
    if (filt.size() < 2 || filt.size() != pred.size())
        throw validation_error("update_transitions: filter output is incomplete");
    if (sm.size() != filt.size())
        throw validation_error("update_transitions: smoothed probabilities missing "
                               "(run kim_smooth first)");

    const double P[2][2] = {{trans.p11, trans.p12}, {trans.p21, trans.p22}};
    double num[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double den[2] = {0.0, 0.0};
    for (std::size_t t = 1; t < filt.size(); ++t) {
        double ratio[2];
        for (int j = 0; j < 2; ++j) {
            if (pred[t][j] > 0.0) {
                ratio[j] = sm[t][j] / pred[t][j];
            } else if (sm[t][j] <= 0.0) {
                ratio[j] = 0.0;
            } else {
                throw numeric_error("update_transitions: zero predicted probability for regime " +
                                    std::to_string(j + 1) + " at day " + std::to_string(t + 1));
            }
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                num[i][j] += filt[t - 1][i] * P[i][j] * ratio[j];
        den[0] += sm[t - 1][0];
        den[1] += sm[t - 1][1];
    }

    double rows[2][2];
    for (int i = 0; i < 2; ++i) {
        const double rowsum = num[i][0] + num[i][1];
        if (!(den[i] > 0.0) || !(rowsum > 0.0))
            throw numeric_error("update_transitions: regime collapse, no posterior mass in "
                                "regime " +
                                std::to_string(i + 1));
        rows[i][0] = std::clamp(num[i][0] / rowsum, 0.0, 1.0);
        rows[i][1] = 1.0 - rows[i][0];
    }

    TransitionMatrix out;
    out.p11 = rows[0][0];
    out.p12 = rows[0][1];
    out.p21 = rows[1][0];
    out.p22 = rows[1][1];
    return out;
}

RegimeModel initial_model(const std::vector<double>& series, const LevelGuard& guard) {
    check_series(series, "initial_model");
    const std::size_t n = series.size();

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        sxx += series[t - 1] * series[t - 1];
        sxy += series[t - 1] * series[t];
    }
    if (!(sxx > 0.0))
        throw validation_error("initial_model: series levels are all zero");
    const double slope = sxy / sxx;

    double srr = 0.0, sd = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double lvl = guarded_level(series[t - 1], guard);
        const double r = (series[t] - slope * series[t - 1]) / lvl;
        srr += r * r;
        sd += series[t] - series[t - 1];
    }
    const double steps = static_cast<double>(n - 1);
    const double mu = sd / steps;
    double svv = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double v = series[t] - series[t - 1] - mu;
        svv += v * v;
    }

    RegimeModel model;
    model.kappa = slope - 1.0;
    model.sigma_m = std::sqrt(srr / steps);
    model.mu_l = mu;
    model.sigma_l = std::sqrt(svv / steps);
    model.trans = make_transition_matrix(0.95, 0.95);
    if (!(model.sigma_m > 0.0) || !(model.sigma_l > 0.0))
        throw validation_error("initial_model: series is too regular to set starting "
                               "volatilities");
    validate(model);
    return model;
}

namespace {

EMResult em_single(const std::vector<double>& series, const RegimeModel& init,
                   const EMConfig& config) {
    check_series(series, "em_calibrate");
    validate(init);
    if (!(config.tolerance > 0.0))
        throw validation_error("em_calibrate: tolerance must be positive");
    if (config.max_iterations < 1)
        throw validation_error("em_calibrate: max_iterations must be at least 1");

    // Frozen for the whole run: re-estimating the initial distribution from
    // the updated transitions would break the monotonicity guarantee.
    const std::array<double, 2> init_probs =
        config.initial_probabilities.value_or(stationary_distribution(init.trans));
    FilterOptions filter_options;
    filter_options.guard = config.guard;

    EMResult out;
    RegimeModel model = init;
    double previous = neg_inf;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        FilterOutput fo = hamilton_filter(series, model, init_probs, filter_options);
        if (fo.loglik < previous - 1e-8)
            throw numeric_error("em_calibrate: log-likelihood decreased at iteration " +
                                std::to_string(iter) + " (" + std::to_string(previous) + " -> " +
                                std::to_string(fo.loglik) + ")");
        fo.smoothed = kim_smooth(fo, model.trans);

        out.trace.push_back({model, fo.loglik});
        out.model = model;
        out.iterations = iter;
        out.level_floor_count = fo.level_floor_count;
        if (std::fabs(fo.loglik - previous) < config.tolerance) {
            out.converged = true;
            break;
        }
        previous = fo.loglik;

        try {
            const BaseRegimeEstimate base = m_step_base(series, fo.smoothed, config.guard);
            const ShiftedRegimeEstimate shifted = m_step_shifted(series, fo.smoothed);
            RegimeModel next;
            next.kappa = base.kappa;
            next.sigma_m = base.sigma_m;
            next.mu_l = shifted.mu_l;
            next.sigma_l = shifted.sigma_l;
            next.trans = update_transitions(fo, model.trans);
            validate(next);
            model = next;
        } catch (const error& e) {
            throw numeric_error("em_calibrate: update failed at iteration " +
                                std::to_string(iter) + " (last valid log-likelihood " +
                                std::to_string(fo.loglik) + "): " + e.what());
        }
    }
    return out;
}

RegimeModel jittered(const RegimeModel& base, Rng& rng) {
    RegimeModel m = base;
    m.kappa += 0.2 * (rng.uniform() - 0.5);
    m.sigma_m *= std::exp(0.6 * (rng.uniform() - 0.5));
    m.mu_l += m.sigma_l * (rng.uniform() - 0.5);
    m.sigma_l *= std::exp(0.6 * (rng.uniform() - 0.5));
    return m;
}

} // namespace

EMResult em_calibrate(const std::vector<double>& series, const RegimeModel& init,
                      const EMConfig& config) {
    if (config.extra_starts <= 0)
        return em_single(series, init, config);

    Rng rng(config.jitter_seed);
    bool have_best = false;
    EMResult best;
    std::string last_error;
    for (int k = 0; k <= config.extra_starts; ++k) {
        const RegimeModel start = (k == 0) ? init : jittered(init, rng);
        try {
            EMResult r = em_single(series, start, config);
            if (!have_best || r.trace.back().loglik > best.trace.back().loglik) {
                best = std::move(r);
                have_best = true;
            }
        } catch (const error& e) {
            last_error = e.what();
        }
    }
    if (!have_best)
        throw numeric_error("em_calibrate: every start failed; last error: " + last_error);
    return best;
}

const char* regime_label_name(RegimeLabel label) {
    return label == RegimeLabel::extreme ? "extreme" : "normal";
}

std::vector<RegimeLabel> classify_regimes(const std::vector<std::array<double, 2>>& smoothed,
                                          double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw validation_error("classify_regimes: threshold must lie strictly between 0 and 1");
    std::vector<RegimeLabel> labels;
    labels.reserve(smoothed.size());
    for (const auto& pair : smoothed)
        labels.push_back(pair[1] > threshold ? RegimeLabel::extreme : RegimeLabel::normal);
    return labels;
}

RegimeResiduals extract_regime_residuals(const std::vector<double>& series,
                                         const RegimeModel& model,
                                         const std::vector<std::array<double, 2>>& smoothed,
                                         const LevelGuard& guard) {
    check_series(series, "extract_regime_residuals");
    check_smoothed_size(series, smoothed, "extract_regime_residuals");
    validate(model);

    const std::size_t n = series.size();
    RegimeResiduals out;
    out.base.reserve(n - 1);
    out.shifted.reserve(n - 1);
    out.pooled.reserve(n - 1);
    for (std::size_t t = 1; t < n; ++t) {
        const double lvl = guarded_level(series[t - 1], guard);
        const double base_mean = (1.0 + model.kappa) * series[t - 1];
        const double shifted_mean = series[t - 1] + model.mu_l;
        out.base.push_back({(series[t] - base_mean) / (model.sigma_m * lvl), smoothed[t][0]});
        out.shifted.push_back({(series[t] - shifted_mean) / model.sigma_l, smoothed[t][1]});
        out.pooled.push_back(series[t] -
                             (smoothed[t][0] * base_mean + smoothed[t][1] * shifted_mean));
    }
    return out;
}

} // namespace tempdyn
