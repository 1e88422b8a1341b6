#include "tempdyn/ghdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tempdyn/errors.hpp"
#include "tempdyn/quadrature.hpp"
#include "tempdyn/special.hpp"

namespace tempdyn {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double inf = std::numeric_limits<double>::infinity();

double gamma_param(const GHParams& p) { // sqrt(alpha^2 - beta^2)
    return std::sqrt((p.alpha - p.beta) * (p.alpha + p.beta));
}

std::string describe(const GHParams& p) {
    return family_name(p.family) + "(nu=" + std::to_string(p.nu) +
           ", alpha=" + std::to_string(p.alpha) + ", beta=" + std::to_string(p.beta) +
           ", mu=" + std::to_string(p.mu) + ", delta=" + std::to_string(p.delta) + ")";
}

} // namespace

std::string family_name(GHFamily family) {
    switch (family) {
    case GHFamily::gh: return "gh";
    case GHFamily::nig: return "nig";
    case GHFamily::hyp: return "hyp";
    case GHFamily::vg: return "vg";
    case GHFamily::normal: return "normal";
    }
    throw validation_error("family_name: unknown family tag");
}

GHFamily family_from_name(const std::string& name) {
    if (name == "gh")
        return GHFamily::gh;
    if (name == "nig")
        return GHFamily::nig;
    if (name == "hyp")
        return GHFamily::hyp;
    if (name == "vg")
        return GHFamily::vg;
    if (name == "normal")
        return GHFamily::normal;
    throw validation_error("unknown distribution family '" + name +
                           "' (expected gh, nig, hyp, vg, or normal)");
}

GHParams make_gh(double nu, double alpha, double beta, double mu, double delta) {
    GHParams p{GHFamily::gh, nu, alpha, beta, mu, delta};
    validate(p);
    return p;
}

GHParams make_nig(double alpha, double beta, double mu, double delta) {
    GHParams p{GHFamily::nig, -0.5, alpha, beta, mu, delta};
    validate(p);
    return p;
}

GHParams make_hyp(double alpha, double beta, double mu, double delta) {
    GHParams p{GHFamily::hyp, 1.0, alpha, beta, mu, delta};
    validate(p);
    return p;
}

GHParams make_vg(double nu, double alpha, double beta, double mu) {
    GHParams p{GHFamily::vg, nu, alpha, beta, mu, 0.0};
    validate(p);
    return p;
}

GHParams make_normal(double mean, double stddev) {
    GHParams p{GHFamily::normal, 0.0, 0.0, 0.0, mean, stddev};
    validate(p);
    return p;
}

void validate(const GHParams& p) {
    const auto bad = [&](const std::string& what) {
        throw validation_error("invalid " + describe(p) + ": " + what);
    };
    if (!std::isfinite(p.nu) || !std::isfinite(p.alpha) || !std::isfinite(p.beta) ||
        !std::isfinite(p.mu) || !std::isfinite(p.delta))
        bad("parameters must be finite");

    if (p.family == GHFamily::normal) {
        if (!(p.delta > 0.0))
            bad("standard deviation must be > 0");
        return;
    }
    if (!(p.alpha > 0.0))
        bad("alpha must be > 0");
    if (!(std::fabs(p.beta) < p.alpha))
        bad("|beta| must be < alpha");
    switch (p.family) {
    case GHFamily::gh:
        if (!(p.delta > 0.0))
            bad("delta must be > 0");
        break;
    case GHFamily::nig:
        if (p.nu != -0.5)
            bad("nu must equal -1/2");
        if (!(p.delta > 0.0))
            bad("delta must be > 0");
        break;
    case GHFamily::hyp:
        if (p.nu != 1.0)
            bad("nu must equal 1");
        if (!(p.delta > 0.0))
            bad("delta must be > 0");
        break;
    case GHFamily::vg:
        if (p.delta != 0.0)
            bad("delta must equal 0");
        if (!(p.nu > 0.0))
            bad("nu must be > 0");
        break;
    case GHFamily::normal:
        break;
    }
}

namespace {

// log of the VG normalizing constant gamma^(2 nu) / (sqrt(pi) Gamma(nu)
// (2 alpha)^(nu - 1/2)).
double vg_log_norm(const GHParams& p) {
    const double g = gamma_param(p);
    return 2.0 * p.nu * std::log(g) - 0.5 * std::log(pi) - std::lgamma(p.nu) -
           (p.nu - 0.5) * std::log(2.0 * p.alpha);
}

// log pdf of VG at distance r = |x - mu| > 0 from the center.
double vg_log_pdf_at(const GHParams& p, double signed_dev, double r) {
    return vg_log_norm(p) + (p.nu - 0.5) * std::log(r) +
           bessel_k_full(p.nu - 0.5, p.alpha * r).log_value + p.beta * signed_dev;
}

// Finite limit of the VG log pdf at x = mu, defined for nu > 1/2.
double vg_log_pdf_center(const GHParams& p) {
    return vg_log_norm(p) + std::lgamma(p.nu - 0.5) - std::log(2.0) +
           (p.nu - 0.5) * std::log(2.0 / p.alpha);
}

} // namespace

double log_pdf(const GHParams& p, double x) {
    validate(p);
    const double dev = x - p.mu;
    switch (p.family) {
    case GHFamily::normal: {
        const double z = dev / p.delta;
        return -0.5 * std::log(2.0 * pi) - std::log(p.delta) - 0.5 * z * z;
    }
    case GHFamily::nig: {
        const double g = gamma_param(p);
        const double q = std::sqrt(p.delta * p.delta + dev * dev);
        return std::log(p.alpha) + std::log(p.delta) - std::log(pi) + p.delta * g +
               p.beta * dev + bessel_k_full(1.0, p.alpha * q).log_value - std::log(q);
    }
    case GHFamily::hyp: {
        const double g = gamma_param(p);
        const double q = std::sqrt(p.delta * p.delta + dev * dev);
        return std::log(g) - std::log(2.0) - std::log(p.alpha) - std::log(p.delta) -
               bessel_k_full(1.0, p.delta * g).log_value - p.alpha * q + p.beta * dev;
    }
    case GHFamily::gh: {
        const double g = gamma_param(p);
        const double q = std::sqrt(p.delta * p.delta + dev * dev);
        const double log_xi = p.nu * std::log(g) - 0.5 * std::log(2.0 * pi) -
                              (p.nu - 0.5) * std::log(p.alpha) - p.nu * std::log(p.delta) -
                              bessel_k_full(p.nu, p.delta * g).log_value;
        return log_xi + (0.5 * p.nu - 0.25) * std::log(q * q) + p.beta * dev +
               bessel_k_full(p.nu - 0.5, p.alpha * q).log_value;
    }
    case GHFamily::vg: {
        const double r = std::fabs(dev);
        if (r == 0.0)
            return p.nu > 0.5 ? vg_log_pdf_center(p) : inf;
        return vg_log_pdf_at(p, dev, r);
    }
    }
    throw validation_error("log_pdf: unknown family tag");
}

double pdf(const GHParams& p, double x) { return std::exp(log_pdf(p, x)); }

GHMoments moments(const GHParams& p) {
    validate(p);
    GHMoments m;
    if (p.family == GHFamily::normal) {
        m.mean = p.mu;
        m.variance = p.delta * p.delta;
        return m;
    }
    const double g = gamma_param(p);
    double ew = 0.0, ew2 = 0.0; // mixing-distribution moments
    if (p.family == GHFamily::vg) {
        // W ~ Gamma(nu, rate gamma^2 / 2)
        ew = 2.0 * p.nu / (g * g);
        ew2 = 4.0 * p.nu * (p.nu + 1.0) / (g * g * g * g);
    } else {
        // W ~ GIG(nu, delta^2, gamma^2): E[W^k] = (delta/gamma)^k
        // K_{nu+k}(delta gamma) / K_nu(delta gamma).
        const double dg = p.delta * g;
        const double k0 = bessel_k_scaled(p.nu, dg);
        ew = (p.delta / g) * bessel_k_scaled(p.nu + 1.0, dg) / k0;
        ew2 = (p.delta / g) * (p.delta / g) * bessel_k_scaled(p.nu + 2.0, dg) / k0;
    }
    m.mean = p.mu + p.beta * ew;
    m.variance = ew + p.beta * p.beta * (ew2 - ew * ew);
    return m;
}

GHParams standardize(const GHParams& p) {
    const GHMoments m = moments(p);
    const double s = std::sqrt(m.variance);
    GHParams out = p;
    if (p.family == GHFamily::normal) {
        out.mu = 0.0;
        out.delta = 1.0;
        return out;
    }
    // (X - mean) / s: alpha and beta scale up by s, delta scales down, the
    // shape index is affine-invariant.
    out.alpha = p.alpha * s;
    out.beta = p.beta * s;
    out.delta = p.delta / s;
    out.mu = (p.mu - m.mean) / s;
    validate(out);
    return out;
}

namespace {

// Integral of the density over [a, b], splitting at mu and taming the VG
// center singularity (nu < 1/2) with the substitution u = t^(1/(2 nu)).
double integral_pdf(const GHParams& p, double a, double b) {
    if (a >= b)
        return 0.0;

    const auto plain = [&](double lo, double hi) {
        if (lo >= hi)
            return 0.0;
        const QuadratureResult r =
            integrate([&](double x) { return pdf(p, x); }, lo, hi, 1e-11, 1e-9);
        if (!r.converged)
            throw numeric_error("cdf quadrature stalled on [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]; achieved error " +
                                std::to_string(r.error_estimate));
        return r.value;
    };

    const bool singular = p.family == GHFamily::vg && p.nu < 0.5;
    if (!singular) {
        if (a < p.mu && p.mu < b)
            return plain(a, p.mu) + plain(p.mu, b);
        return plain(a, b);
    }

    // VG with an interior/adjacent singular point. side = +1 integrates
    // pdf(mu + u) for u in [0, w], side = -1 the mirror image.
    const auto near_center = [&](double w, int side) {
        if (w <= 0.0)
            return 0.0;
        const double inv = 1.0 / (2.0 * p.nu);
        const double limit =
            std::exp(vg_log_norm(p) + std::lgamma(0.5 - p.nu) - std::log(2.0) +
                     (0.5 - p.nu) * std::log(2.0 / p.alpha)) *
            inv;
        const QuadratureResult r = integrate(
            [&](double t) {
                const double u = std::pow(t, inv);
                if (u < 1e-150)
                    return limit;
                return std::exp(vg_log_pdf_at(p, double(side) * u, u)) * inv *
                       std::pow(t, inv - 1.0);
            },
            0.0, std::pow(w, 2.0 * p.nu), 1e-11, 1e-9);
        if (!r.converged)
            throw numeric_error("cdf quadrature stalled near the center; achieved error " +
                                std::to_string(r.error_estimate));
        return r.value;
    };

    if (b <= p.mu) {
        // Entirely on the left: [a, b] = [a, mu] minus [b, mu].
        return near_center(p.mu - a, -1) - near_center(p.mu - b, -1);
    }
    if (a >= p.mu) {
        return near_center(b - p.mu, +1) - near_center(a - p.mu, +1);
    }
    return near_center(p.mu - a, -1) + near_center(b - p.mu, +1);
}

double tail_window(const GHParams& p) {
    return 40.0 * std::sqrt(moments(p).variance);
}

} // namespace

double cdf(const GHParams& p, double x) {
    validate(p);
    if (p.family == GHFamily::normal)
        return norm_cdf((x - p.mu) / p.delta);
    const double w = tail_window(p);
    if (x <= p.mu - w) {
        // Deep lower tail: everything below x within a window is the mass.
        return std::clamp(integral_pdf(p, x - 0.5 * w, x), 0.0, 1.0);
    }
    return std::clamp(integral_pdf(p, p.mu - w, x), 0.0, 1.0);
}

std::vector<double> cdf_sorted(const GHParams& p, const std::vector<double>& xs) {
    validate(p);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] < xs[i - 1])
            throw validation_error("cdf_sorted: points must be ascending");
    std::vector<double> out(xs.size());
    if (xs.empty())
        return out;
    if (p.family == GHFamily::normal) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            out[i] = norm_cdf((xs[i] - p.mu) / p.delta);
        return out;
    }
    double f = cdf(p, xs.front());
    out.front() = f;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        f += integral_pdf(p, xs[i - 1], xs[i]);
        f = std::clamp(f, 0.0, 1.0);
        out[i] = f;
    }
    return out;
}

double mgf(const GHParams& p, double z) {
    validate(p);
    if (p.family == GHFamily::normal)
        return std::exp(p.mu * z + 0.5 * p.delta * p.delta * z * z);

    const double shifted = p.beta + z;
    if (!(std::fabs(shifted) < p.alpha))
        throw validation_error("mgf: z = " + std::to_string(z) +
                               " violates |beta + z| < alpha (beta = " + std::to_string(p.beta) +
                               ", alpha = " + std::to_string(p.alpha) + ")");
    const double g2 = (p.alpha - p.beta) * (p.alpha + p.beta);
    const double s2 = (p.alpha - shifted) * (p.alpha + shifted);

    switch (p.family) {
    case GHFamily::nig:
        return std::exp(p.mu * z + p.delta * (std::sqrt(g2) - std::sqrt(s2)));
    case GHFamily::vg:
        return std::exp(p.mu * z + p.nu * std::log(g2 / s2));
    case GHFamily::hyp:
    case GHFamily::gh: {
        const double order = p.family == GHFamily::hyp ? 1.0 : p.nu;
        const BesselK kg = bessel_k_full(order, p.delta * std::sqrt(g2));
        const BesselK ks = bessel_k_full(order, p.delta * std::sqrt(s2));
        return std::exp(p.mu * z + 0.5 * order * std::log(g2 / s2) + ks.log_value -
                        kg.log_value);
    }
    case GHFamily::normal:
        break;
    }
    throw validation_error("mgf: unknown family tag");
}

double sample_one(const GHParams& p, Rng& rng) {
    if (p.family == GHFamily::normal)
        return p.mu + p.delta * rng.normal();
    const double g = gamma_param(p);
    const double w = rng.gig(p.nu, p.delta * p.delta, g * g);
    return p.mu + p.beta * w + std::sqrt(w) * rng.normal();
}

std::vector<double> sample(const GHParams& p, std::size_t n, std::uint64_t seed) {
    validate(p);
    if (n == 0)
        throw validation_error("sample: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out)
        x = sample_one(p, rng);
    return out;
}

} // namespace tempdyn
