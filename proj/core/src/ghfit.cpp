#include "tempdyn/ghfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tempdyn/errors.hpp"
#include "tempdyn/optimize.hpp"
#include "tempdyn/special.hpp"

namespace tempdyn {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double inf = std::numeric_limits<double>::infinity();

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;   // maximum-likelihood (n) standard deviation
    double skew = 0.0;
    double kurt = 3.0;
};

SampleSummary summarize(const std::vector<double>& xs) {
    SampleSummary s;
    s.n = xs.size();
    for (double x : xs)
        s.mean += x;
    s.mean /= double(s.n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double c = x - s.mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= double(s.n);
    m3 /= double(s.n);
    m4 /= double(s.n);
    s.sd = std::sqrt(m2);
    if (m2 > 0.0) {
        s.skew = m3 / std::pow(m2, 1.5);
        s.kurt = m4 / (m2 * m2);
    }
    return s;
}

// Decode the unconstrained simplex point into parameters. No validation:
// every decoded point is inside the admissible region by construction
// (degenerate boundary values surface as +inf objective instead).
GHParams decode(GHFamily family, const std::vector<double>& v) {
    GHParams p;
    p.family = family;
    p.alpha = std::exp(v[0]);
    p.beta = p.alpha * std::tanh(v[1]);
    p.mu = v[2];
    switch (family) {
    case GHFamily::nig:
        p.nu = -0.5;
        p.delta = std::exp(v[3]);
        break;
    case GHFamily::hyp:
        p.nu = 1.0;
        p.delta = std::exp(v[3]);
        break;
    case GHFamily::vg:
        p.nu = std::exp(v[3]);
        p.delta = 0.0;
        break;
    case GHFamily::gh:
        p.delta = std::exp(v[3]);
        p.nu = v[4];
        break;
    case GHFamily::normal:
        break;
    }
    return p;
}

std::vector<double> encode(const GHParams& p) {
    std::vector<double> v{std::log(p.alpha), std::atanh(p.beta / p.alpha), p.mu, 0.0};
    switch (p.family) {
    case GHFamily::nig:
    case GHFamily::hyp:
        v[3] = std::log(p.delta);
        break;
    case GHFamily::vg:
        v[3] = std::log(p.nu);
        break;
    case GHFamily::gh:
        v[3] = std::log(p.delta);
        v.push_back(p.nu);
        break;
    case GHFamily::normal:
        break;
    }
    return v;
}

// Mean negative log-likelihood with the per-family normalizer hoisted out of
// the sample loop. `center_clamp` keeps the VG objective finite when mu
// crosses a sample point (the density has an integrable pole there).
double mean_nll(const GHParams& p, const std::vector<double>& xs, double center_clamp) {
    const double n = double(xs.size());
    const double g2 = (p.alpha - p.beta) * (p.alpha + p.beta);
    if (!(g2 > 0.0) || !std::isfinite(p.mu))
        return inf;
    const double g = std::sqrt(g2);
    double total = 0.0;

    switch (p.family) {
    case GHFamily::nig: {
        if (!(p.delta > 0.0) || !std::isfinite(p.delta))
            return inf;
        const double c =
            std::log(p.alpha) + std::log(p.delta) - std::log(pi) + p.delta * g;
        const double d2 = p.delta * p.delta;
        for (double x : xs) {
            const double dev = x - p.mu;
            const double q = std::sqrt(d2 + dev * dev);
            total += c + p.beta * dev + bessel_k_full(1.0, p.alpha * q).log_value -
                     std::log(q);
        }
        break;
    }
    case GHFamily::hyp: {
        if (!(p.delta > 0.0) || !std::isfinite(p.delta))
            return inf;
        const double c = std::log(g) - std::log(2.0) - std::log(p.alpha) -
                         std::log(p.delta) - bessel_k_full(1.0, p.delta * g).log_value;
        const double d2 = p.delta * p.delta;
        for (double x : xs) {
            const double dev = x - p.mu;
            total += c - p.alpha * std::sqrt(d2 + dev * dev) + p.beta * dev;
        }
        break;
    }
    case GHFamily::gh: {
        if (!(p.delta > 0.0) || !std::isfinite(p.delta) || !std::isfinite(p.nu))
            return inf;
        const double c = p.nu * std::log(g) - 0.5 * std::log(2.0 * pi) -
                         (p.nu - 0.5) * std::log(p.alpha) - p.nu * std::log(p.delta) -
                         bessel_k_full(p.nu, p.delta * g).log_value;
        const double d2 = p.delta * p.delta;
        for (double x : xs) {
            const double dev = x - p.mu;
            const double q = std::sqrt(d2 + dev * dev);
            total += c + (p.nu - 0.5) * std::log(q) + p.beta * dev +
                     bessel_k_full(p.nu - 0.5, p.alpha * q).log_value;
        }
        break;
    }
    case GHFamily::vg: {
        if (!(p.nu > 0.0) || !std::isfinite(p.nu))
            return inf;
        const double c = 2.0 * p.nu * std::log(g) - 0.5 * std::log(pi) -
                         std::lgamma(p.nu) - (p.nu - 0.5) * std::log(2.0 * p.alpha);
        for (double x : xs) {
            const double dev = x - p.mu;
            const double r = std::max(std::fabs(dev), center_clamp);
            total += c + (p.nu - 0.5) * std::log(r) +
                     bessel_k_full(p.nu - 0.5, p.alpha * r).log_value + p.beta * dev;
        }
        break;
    }
    case GHFamily::normal:
        return inf; // fitted in closed form, never through the simplex
    }
    if (!std::isfinite(total))
        return inf;
    return -total / n;
}

// Moment-informed starting parameter sets. alpha scales inversely with the
// sample spread, delta with the spread itself; asymmetric starts lean the
// tilt parameter toward the sample skew.
std::vector<GHParams> starting_points(GHFamily family, const SampleSummary& s, int count) {
    const double sign_skew = s.skew < 0.0 ? -1.0 : 1.0;
    const double excess = std::max(s.kurt - 3.0, 0.3);
    const double q = std::sqrt(3.0 / excess); // NIG-style alpha*delta match

    struct Shape {
        double alpha_mult, tilt, mu_shift, delta_mult, nu;
    };
    const Shape shapes[8] = {
        {1.0, 0.0, 0.0, 1.0, 1.0},
        {2.0, 0.0, 0.0, 2.0, 2.0},
        {0.6, 0.0, 0.0, 0.5, 0.7},
        {1.0, 0.5, -0.5, 1.0, 1.0},
        {1.0, -0.5, 0.5, 1.0, 1.0},
        {3.0, 0.3 * sign_skew, 0.0, 3.0, 3.0},
        {0.5, 0.8 * sign_skew, -sign_skew, 1.0, 0.6},
        {q, 0.2 * sign_skew, 0.0, q, 4.0},
    };
    const double gh_nu[8] = {-0.5, 1.0, 2.0, -1.5, 0.5, 1.0, -0.5, 3.0};

    std::vector<GHParams> starts;
    for (int i = 0; i < std::min(count, 8); ++i) {
        const Shape& sh = shapes[i];
        GHParams p;
        p.family = family;
        p.mu = s.mean + sh.mu_shift * s.sd;
        switch (family) {
        case GHFamily::nig:
            p.nu = -0.5;
            p.alpha = sh.alpha_mult / s.sd;
            p.delta = sh.delta_mult * s.sd;
            break;
        case GHFamily::hyp:
            p.nu = 1.0;
            p.alpha = sh.alpha_mult / s.sd;
            p.delta = sh.delta_mult * s.sd;
            break;
        case GHFamily::gh:
            p.nu = gh_nu[i];
            p.alpha = sh.alpha_mult / s.sd;
            p.delta = sh.delta_mult * s.sd;
            break;
        case GHFamily::vg:
            p.nu = sh.nu;
            p.alpha = sh.alpha_mult * std::sqrt(2.0 * sh.nu) / s.sd;
            p.delta = 0.0;
            break;
        case GHFamily::normal:
            break;
        }
        p.beta = p.alpha * std::tanh(sh.tilt);
        starts.push_back(p);
    }
    return starts;
}

} // namespace

double log_likelihood(const GHParams& params, const std::vector<double>& samples) {
    validate(params);
    double total = 0.0;
    for (double x : samples)
        total += log_pdf(params, x);
    return total;
}

FitResult fit_mle(const std::vector<double>& samples, GHFamily family,
                  const FitOptions& options) {
    if (samples.size() < 50)
        throw validation_error("fit_mle: need at least 50 samples, got " +
                               std::to_string(samples.size()));
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi)
        throw validation_error("fit_mle: samples are constant");
    const SampleSummary s = summarize(samples);
    if (!(s.sd > 0.0))
        throw validation_error("fit_mle: samples have zero variance");

    FitResult result;
    if (family == GHFamily::normal) {
        result.params = make_normal(s.mean, s.sd);
        result.loglik = log_likelihood(result.params, samples);
        result.converged = true;
        result.start_points_used = 1;
        return result;
    }

    const double center_clamp = family == GHFamily::vg ? 1e-8 * s.sd : 0.0;
    const auto objective = [&](const std::vector<double>& v) {
        return mean_nll(decode(family, v), samples, center_clamp);
    };

    NelderMeadOptions nm;
    nm.initial_step = 0.3;
    nm.tol_f = options.tolerance;
    nm.tol_x = 1e-9;
    nm.max_iterations = options.max_iterations;

    const std::vector<GHParams> starts = starting_points(family, s, options.starts);
    std::vector<double> best_x;
    double best_f = inf;
    bool best_converged = false;
    int iterations = 0;
    std::string diagnostics;

    for (std::size_t i = 0; i < starts.size(); ++i) {
        const NelderMeadResult run = nelder_mead(objective, encode(starts[i]), nm);
        iterations += run.iterations;
        if (std::isfinite(run.fx) && run.fx < best_f) {
            best_f = run.fx;
            best_x = run.x;
            best_converged = run.converged;
        }
        diagnostics += "start " + std::to_string(i + 1) + ": objective " +
                       std::to_string(run.fx) + (run.converged ? "" : " (not converged)") +
                       "; ";
    }
    if (!std::isfinite(best_f))
        throw numeric_error("fit_mle: no start produced a finite likelihood for family " +
                            family_name(family) + ": " + diagnostics);

    // Restart the simplex at the winner; a fresh simplex escapes collapse.
    const NelderMeadResult polish = nelder_mead(objective, best_x, nm);
    iterations += polish.iterations;
    if (std::isfinite(polish.fx) && polish.fx <= best_f) {
        best_f = polish.fx;
        best_x = polish.x;
        best_converged = polish.converged || best_converged;
    }

    result.params = decode(family, best_x);
    validate(result.params);
    result.loglik = log_likelihood(result.params, samples);
    result.iterations = iterations;
    result.converged = best_converged;
    result.start_points_used = int(starts.size());
    return result;
}

} // namespace tempdyn
