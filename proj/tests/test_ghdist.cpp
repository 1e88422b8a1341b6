// Tests for the generalized-hyperbolic distribution family: densities,
// distribution functions, moment generating functions, exact sampling, and
// maximum-likelihood fitting.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "support/oracles.hpp"
#include "tempdyn/errors.hpp"
#include "tempdyn/ghdist.hpp"
#include "tempdyn/ghfit.hpp"
#include "tempdyn/quadrature.hpp"
#include "tempdyn/rng.hpp"
#include "tempdyn/special.hpp"
#include "tempdyn/stats.hpp"

using namespace tempdyn;

namespace {

// Evenly spaced probe points covering the central body of a distribution.
std::vector<double> probe_points(const GHParams& p, int count, double half_width_sds) {
    const GHMoments m = moments(p);
    const double sd = std::sqrt(m.variance);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        xs.push_back(m.mean - half_width_sds * sd + 2.0 * half_width_sds * sd * f);
    }
    return xs;
}

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double m2 = 0.0;       // population central moments
    double m4 = 0.0;
};

SampleMoments sample_moments(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    SampleMoments out;
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    for (double x : xs) {
        const double d = x - out.mean;
        out.m2 += d * d;
        out.m4 += d * d * d * d;
    }
    out.m2 /= n;
    out.m4 /= n;
    out.variance = out.m2 * n / (n - 1.0);
    return out;
}

} // namespace

TEST_CASE("family names round-trip and reject unknowns") {
    for (GHFamily f : {GHFamily::gh, GHFamily::nig, GHFamily::hyp, GHFamily::vg, GHFamily::normal}) {
        CHECK(family_from_name(family_name(f)) == f);
    }
    CHECK(family_name(GHFamily::nig) == "nig");
    CHECK_THROWS_AS((void)family_from_name("cauchy"), validation_error);
}

TEST_CASE("parameter validation enforces admissibility") {
    CHECK_THROWS_AS((void)make_nig(1.0, 1.0, 0.0, 1.0), validation_error);  // |beta| = alpha
    CHECK_THROWS_AS((void)make_nig(1.0, 1.5, 0.0, 1.0), validation_error);  // |beta| > alpha
    CHECK_THROWS_AS((void)make_nig(-1.0, 0.0, 0.0, 1.0), validation_error); // alpha <= 0
    CHECK_THROWS_AS((void)make_nig(1.0, 0.0, 0.0, 0.0), validation_error);  // delta <= 0
    CHECK_THROWS_AS((void)make_vg(0.0, 1.0, 0.0, 0.0), validation_error);   // nu <= 0
    CHECK_THROWS_AS((void)make_normal(0.0, 0.0), validation_error);         // stddev <= 0
    CHECK_NOTHROW((void)make_gh(-1.2, 1.0, 0.3, 0.0, 2.0));
    CHECK_NOTHROW((void)make_vg(0.3, 1.0, 0.4, 0.0));
}

TEST_CASE("symmetric hyperbolic density at the center matches the Bessel closed form") {
    // alpha = delta = 1, beta = 0: f(mu) = e^{-1} / (2 K_1(1)), with K_1(1)
    // taken from the independent integral representation.
    const GHParams p = make_hyp(1.0, 0.0, 0.6179, 1.0);
    const double k1 = testing::bessel_k_integral(1.0, 1.0);
    const double expected = std::exp(-1.0) / (2.0 * k1);
    CHECK(pdf(p, 0.6179) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("half-integer and unit shape indices reproduce the named subfamilies") {
    // The five-parameter density with nu = -1/2 must coincide with the
    // four-parameter NIG evaluation, and nu = 1 with HYP, pointwise.
    const double alpha = 1.7, beta = -0.6, mu = 0.4, delta = 1.3;
    const GHParams as_gh_nig = make_gh(-0.5, alpha, beta, mu, delta);
    const GHParams as_nig = make_nig(alpha, beta, mu, delta);
    const GHParams as_gh_hyp = make_gh(1.0, alpha, beta, mu, delta);
    const GHParams as_hyp = make_hyp(alpha, beta, mu, delta);

    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const double x = mu + 12.0 * (rng.uniform() - 0.5);
        const double nig_direct = pdf(as_nig, x);
        const double hyp_direct = pdf(as_hyp, x);
        CHECK(pdf(as_gh_nig, x) == doctest::Approx(nig_direct).epsilon(1e-10));
        CHECK(pdf(as_gh_hyp, x) == doctest::Approx(hyp_direct).epsilon(1e-10));
        CHECK(log_pdf(as_gh_nig, x) == doctest::Approx(std::log(nig_direct)).epsilon(1e-10));
    }
}

TEST_CASE("densities integrate to one across the family grid") {
    const std::vector<GHParams> grid = {
        make_nig(1.5, 0.7, -1.0, 2.0),
        make_nig(3.0, -2.0, 0.0, 0.5),
        make_hyp(1.7178, -0.3921, 0.6179, 1.6783),
        make_hyp(0.8, 0.5, 2.0, 1.0),
        make_gh(2.5, 2.0, -1.0, 1.0, 1.5),
        make_gh(-1.2, 1.0, 0.3, 0.0, 2.0),
        make_vg(2.5, 2.0, -1.0, 1.0),
        make_vg(0.8, 1.5, 0.0, 0.0),
        make_vg(0.3, 1.0, 0.4, 0.0), // density diverges at the center
        make_normal(1.0, 2.0),
    };
    for (const GHParams& p : grid) {
        CAPTURE(family_name(p.family));
        CAPTURE(p.nu);
        const GHMoments m = moments(p);
        const double sd = std::sqrt(m.variance);
        const double lo = m.mean - 40.0 * sd;
        const double hi = m.mean + 40.0 * sd;
        const double total = cdf(p, hi) - cdf(p, lo);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("symmetric distributions put half their mass below the location") {
    const std::vector<GHParams> grid = {
        make_nig(2.0, 0.0, 1.0, 1.5),
        make_hyp(1.0, 0.0, 0.0, 1.0),
        make_gh(0.7, 1.0, 0.0, -2.0, 1.0),
        make_vg(0.8, 1.5, 0.0, 0.5),
        make_vg(0.3, 1.0, 0.0, 0.0), // singular center, handled by substitution
        make_normal(-1.0, 0.7),
    };
    for (const GHParams& p : grid) {
        CAPTURE(family_name(p.family));
        CHECK(cdf(p, p.mu) == doctest::Approx(0.5).epsilon(1e-7));
    }
}

TEST_CASE("distribution function increments equal quadrature of the density") {
    const GHParams p = make_nig(1.4, 0.5, 0.2, 1.1);
    const auto density = [&](double x) { return pdf(p, x); };
    const std::vector<std::pair<double, double>> segments = {
        {-2.0, -0.5}, {-0.5, 0.2}, {0.2, 1.7}, {1.7, 6.0}};
    for (auto [a, b] : segments) {
        const double direct = integrate_or_throw(density, a, b);
        const double viacdf = cdf(p, b) - cdf(p, a);
        CHECK(viacdf == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("batch distribution evaluation matches pointwise and stays monotone") {
    const GHParams p = make_vg(1.8, 1.2, 0.3, -0.4);
    std::vector<double> xs = probe_points(p, 50, 6.0);
    const std::vector<double> batch = cdf_sorted(p, xs);
    REQUIRE(batch.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(batch[i] == doctest::Approx(cdf(p, xs[i])).epsilon(1e-7));
        if (i > 0) CHECK(batch[i] >= batch[i - 1]);
    }
    std::vector<double> unsorted = xs;
    std::swap(unsorted[3], unsorted[10]);
    CHECK_THROWS_AS((void)cdf_sorted(p, unsorted), validation_error);
}

TEST_CASE("distribution function matches a large exact-sampling experiment") {
    const GHParams p = make_nig(1.5, 0.6, 0.3, 1.2);
    constexpr std::size_t n = 1'000'000;
    std::vector<double> draws = sample(p, n, 777);
    std::sort(draws.begin(), draws.end());
    for (double x : probe_points(p, 20, 3.0)) {
        const double fx = cdf(p, x);
        const double se = std::sqrt(fx * (1.0 - fx) / static_cast<double>(n));
        CHECK(std::fabs(testing::empirical_cdf(draws, x) - fx) <= 3.0 * se + 1e-9);
    }
}

TEST_CASE("moment generating function identities") {
    const std::vector<GHParams> grid = {
        make_nig(1.5, 0.7, -1.0, 2.0),
        make_hyp(1.7178, -0.3921, 0.6179, 1.6783),
        make_gh(2.5, 2.0, -1.0, 1.0, 1.5),
        make_gh(-1.2, 1.0, 0.3, 0.0, 2.0),
        make_vg(2.5, 2.0, -1.0, 1.0),
        make_normal(1.0, 2.0),
    };
    SUBCASE("value one at zero") {
        for (const GHParams& p : grid) {
            CAPTURE(family_name(p.family));
            CHECK(mgf(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("centered transform is even when the tilt is zero") {
        const std::vector<GHParams> symmetric = {
            make_nig(1.5, 0.0, -1.0, 2.0),
            make_hyp(1.0, 0.0, 0.3, 1.0),
            make_vg(1.5, 2.0, 0.0, 0.7),
            make_gh(0.8, 1.3, 0.0, 0.2, 1.1),
        };
        for (const GHParams& p : symmetric) {
            CAPTURE(family_name(p.family));
            for (double z : {0.1, 0.35, 0.6}) {
                const double plus = mgf(p, z) * std::exp(-p.mu * z);
                const double minus = mgf(p, -z) * std::exp(p.mu * z);
                CHECK(plus == doctest::Approx(minus).epsilon(1e-12));
            }
        }
    }
    SUBCASE("agrees with quadrature of the exponentially tilted density") {
        for (const GHParams& p : grid) {
            CAPTURE(family_name(p.family));
            const GHMoments m = moments(p);
            const double sd = std::sqrt(m.variance);
            // Keep the tilt well inside the strip so the tilted mass still
            // fits in a wide finite window.
            const double room = (p.family == GHFamily::normal)
                                    ? 0.5
                                    : 0.25 * (p.alpha - std::fabs(p.beta));
            for (double z : {-room, room * 0.5, room}) {
                const auto integrand = [&](double x) { return std::exp(z * x) * pdf(p, x); };
                const double direct =
                    integrate_or_throw(integrand, m.mean - 60.0 * sd, p.mu, 1e-12, 1e-8) +
                    integrate_or_throw(integrand, p.mu, m.mean + 60.0 * sd, 1e-12, 1e-8);
                CHECK(mgf(p, z) == doctest::Approx(direct).epsilon(1e-5));
            }
        }
    }
    SUBCASE("arguments at or beyond the strip boundary are rejected") {
        const GHParams p = make_nig(1.5, 0.7, 0.0, 2.0);
        CHECK_THROWS_AS((void)mgf(p, 0.8), validation_error);   // beta + z = alpha
        CHECK_THROWS_AS((void)mgf(p, -2.3), validation_error);  // beta + z < -alpha
        CHECK_NOTHROW((void)mgf(p, 0.79));
        CHECK_NOTHROW((void)mgf(make_normal(0.0, 1.0), 50.0));  // entire function
    }
}

TEST_CASE("analytic moments agree with differentiating the moment generating function") {
    const std::vector<GHParams> grid = {
        make_nig(1.5, 0.7, -1.0, 2.0),
        make_hyp(1.7178, -0.3921, 0.6179, 1.6783),
        make_gh(2.5, 2.0, -1.0, 1.0, 1.5),
        make_vg(2.5, 2.0, -1.0, 1.0),
        make_normal(1.0, 2.0),
    };
    for (const GHParams& p : grid) {
        CAPTURE(family_name(p.family));
        const auto mgf_fn = [&](double z) { return mgf(p, z); };
        const testing::MgfMoments numeric = testing::moments_from_mgf(mgf_fn, 1e-5);
        const GHMoments analytic = moments(p);
        CHECK(analytic.mean == doctest::Approx(numeric.mean).epsilon(1e-5));
        const double numeric_var = numeric.second - numeric.mean * numeric.mean;
        CHECK(analytic.variance == doctest::Approx(numeric_var).epsilon(1e-4));
    }
}

TEST_CASE("sampling is deterministic in the seed and decoupled across seeds") {
    const GHParams p = make_hyp(1.7178, -0.3921, 0.6179, 1.6783);
    const std::vector<double> a = sample(p, 512, 42);
    const std::vector<double> b = sample(p, 512, 42);
    const std::vector<double> c = sample(p, 512, 43);
    CHECK(a == b);
    CHECK(a != c);
    CHECK_THROWS_AS((void)sample(p, 0, 42), validation_error);
}

TEST_CASE("sample moments match analytic moments within Monte Carlo error") {
    const std::vector<GHParams> grid = {
        make_nig(1.5, 0.6, 0.3, 1.2),
        make_hyp(1.7178, -0.3921, 0.6179, 1.6783),
        make_vg(1.8, 1.2, 0.3, -0.4),
        make_gh(-1.2, 1.6, 0.3, 0.0, 2.0),
    };
    constexpr std::size_t n = 1'000'000;
    std::uint64_t seed = 2026;
    for (const GHParams& p : grid) {
        CAPTURE(family_name(p.family));
        const std::vector<double> draws = sample(p, n, seed++);
        const SampleMoments s = sample_moments(draws);
        const GHMoments m = moments(p);
        const double se_mean = std::sqrt(s.m2 / static_cast<double>(n));
        const double se_var = std::sqrt((s.m4 - s.m2 * s.m2) / static_cast<double>(n));
        CHECK(std::fabs(s.mean - m.mean) <= 4.0 * se_mean);
        CHECK(std::fabs(s.variance - m.variance) <= 4.0 * se_var);
    }
}

TEST_CASE("affine transforms of normal-inverse-Gaussian draws keep the family") {
    // If X has parameters (alpha, beta, mu, delta) then aX + b has
    // (alpha/a, beta/a, a mu + b, a delta). Verified by a goodness-of-fit
    // test of transformed draws against the transformed distribution.
    const double alpha = 1.5, beta = 0.6, mu = 0.3, delta = 1.2;
    const double a = 2.5, b = -1.0;
    const GHParams source = make_nig(alpha, beta, mu, delta);
    const GHParams target = make_nig(alpha / a, beta / a, a * mu + b, a * delta);

    constexpr std::size_t n = 100'000;
    std::vector<double> draws = sample(source, n, 99);
    for (double& x : draws) x = a * x + b;
    std::sort(draws.begin(), draws.end());

    const std::vector<double> probs = cdf_sorted(target, draws);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, probs[i] - lo, hi - probs[i]});
    }
    const double p_value = kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
    CHECK(p_value > 0.01);
}

TEST_CASE("normal-inverse-Gaussian converges pointwise to the normal limit") {
    // beta = 0 with delta = sigma^2 alpha approaches Normal(mu, sigma) as
    // alpha grows; the sup-distance over the body must shrink monotonically.
    const double sigma = 1.3, mu = 0.4;
    const GHParams limit = make_normal(mu, sigma);
    double previous = std::numeric_limits<double>::infinity();
    for (double alpha : {10.0, 100.0, 1000.0}) {
        const GHParams p = make_nig(alpha, 0.0, mu, sigma * sigma * alpha);
        double worst = 0.0;
        for (double x : probe_points(limit, 81, 5.0)) {
            worst = std::max(worst, std::fabs(pdf(p, x) - pdf(limit, x)));
        }
        CHECK(worst < previous);
        previous = worst;
    }
    CHECK(previous < 1e-4);
}

TEST_CASE("log-density stays finite far into the tails") {
    const std::vector<GHParams> grid = {
        make_nig(1.5, 0.7, -1.0, 2.0),
        make_hyp(1.7178, -0.3921, 0.6179, 1.6783),
        make_gh(2.5, 2.0, -1.0, 1.0, 1.5),
        make_vg(2.5, 2.0, -1.0, 1.0),
    };
    for (const GHParams& p : grid) {
        CAPTURE(family_name(p.family));
        const double scale = (p.family == GHFamily::vg) ? 1.0 : p.delta;
        for (double k : {-100.0, -40.0, -5.0, 5.0, 40.0, 100.0}) {
            const double lp = log_pdf(p, p.mu + k * scale);
            CHECK(std::isfinite(lp));
            CHECK(lp < 0.0);
            CHECK(pdf(p, p.mu + k * scale) >= 0.0);
        }
    }
}

TEST_CASE("variance-gamma center behavior switches at the shape threshold") {
    // nu > 1/2: finite positive density at the location parameter.
    const GHParams finite_center = make_vg(1.8, 1.2, 0.3, -0.4);
    CHECK(std::isfinite(pdf(finite_center, -0.4)));
    CHECK(pdf(finite_center, -0.4) > 0.0);
    // nu <= 1/2: the density diverges at the location parameter, but the
    // distribution function stays well-defined on both sides.
    const GHParams singular = make_vg(0.3, 1.0, 0.4, 0.0);
    CHECK(std::isinf(pdf(singular, 0.0)));
    CHECK(cdf(singular, -0.1) < cdf(singular, 0.1));
    CHECK(cdf(singular, 0.1) - cdf(singular, -0.1) < 1.0);
}

TEST_CASE("normal family maximum likelihood is the closed form") {
    Rng rng(5150);
    std::vector<double> xs(400);
    for (double& x : xs) x = 3.0 + 0.8 * rng.normal();
    const SampleMoments s = sample_moments(xs);
    const double mle_sd = std::sqrt(s.m2); // population normalization

    const FitResult fit = fit_mle(xs, GHFamily::normal);
    CHECK(fit.converged);
    CHECK(fit.params.mu == doctest::Approx(s.mean).epsilon(1e-8));
    CHECK(fit.params.delta == doctest::Approx(mle_sd).epsilon(1e-8));
    CHECK(fit.loglik == doctest::Approx(log_likelihood(fit.params, xs)).epsilon(1e-12));
}

TEST_CASE("hyperbolic maximum likelihood recovers known parameters") {
    const GHParams truth = make_hyp(1.7178, -0.3921, 0.6179, 1.6783);
    const std::vector<double> draws = sample(truth, 20'000, 314159);

    const FitResult fit = fit_mle(draws, GHFamily::hyp);
    CHECK(fit.params.family == GHFamily::hyp);
    CHECK(fit.params.alpha == doctest::Approx(truth.alpha).epsilon(0.10));
    CHECK(fit.params.beta == doctest::Approx(truth.beta).epsilon(0.10));
    CHECK(fit.params.mu == doctest::Approx(truth.mu).epsilon(0.10));
    CHECK(fit.params.delta == doctest::Approx(truth.delta).epsilon(0.10));
    // The maximizer can never score below the generating parameters.
    CHECK(fit.loglik >= log_likelihood(truth, draws));
}

TEST_CASE("normal-inverse-Gaussian maximum likelihood recovers known parameters") {
    const GHParams truth = make_nig(2.0, 0.8, 0.5, 1.5);
    const std::vector<double> draws = sample(truth, 4'000, 271828);
    const FitResult fit = fit_mle(draws, GHFamily::nig);
    CHECK(fit.loglik >= log_likelihood(truth, draws));
    CHECK(fit.params.alpha == doctest::Approx(truth.alpha).epsilon(0.30));
    CHECK(fit.params.beta == doctest::Approx(truth.beta).epsilon(0.30));
    CHECK(fit.params.mu == doctest::Approx(truth.mu).epsilon(0.30));
    CHECK(fit.params.delta == doctest::Approx(truth.delta).epsilon(0.30));
}

TEST_CASE("variance-gamma maximum likelihood recovers known parameters") {
    const GHParams truth = make_vg(1.8, 1.2, 0.3, 0.0);
    const std::vector<double> draws = sample(truth, 4'000, 161803);
    const FitResult fit = fit_mle(draws, GHFamily::vg);
    CHECK(fit.loglik >= log_likelihood(truth, draws));
    CHECK(fit.params.alpha == doctest::Approx(truth.alpha).epsilon(0.30));
    CHECK(fit.params.mu == doctest::Approx(truth.mu).epsilon(0.35).scale(1.0));
}

TEST_CASE("five-parameter fit scores at least as well as its nested subfamily") {
    const GHParams truth = make_nig(1.6, 0.4, 0.0, 1.4);
    const std::vector<double> draws = sample(truth, 1'500, 112358);
    FitOptions quick;
    quick.starts = 4;
    const FitResult nig_fit = fit_mle(draws, GHFamily::nig, quick);
    const FitResult gh_fit = fit_mle(draws, GHFamily::gh, quick);
    // The larger family nests the smaller one, so its optimum cannot be
    // meaningfully worse.
    CHECK(gh_fit.loglik >= nig_fit.loglik - 0.05);
}

TEST_CASE("fitting rejects unusable input") {
    const std::vector<double> tiny(30, 1.0);
    CHECK_THROWS_AS((void)fit_mle(tiny, GHFamily::nig), validation_error);
    const std::vector<double> constant(200, 4.2);
    CHECK_THROWS_AS((void)fit_mle(constant, GHFamily::nig), validation_error);
}

TEST_CASE("standardize produces a unit-variance zero-mean member of the same family") {
    const std::vector<GHParams> cases = {
        make_nig(2.0, 0.8, 0.5, 1.5),
        make_hyp(1.7178, -0.3921, 0.6179, 1.6783),
        make_vg(1.8, 1.2, -0.6, 0.3),
        make_gh(1.1, 2.2, 0.4, -0.2, 1.3),
        make_normal(3.0, 2.5),
    };
    for (const GHParams& original : cases) {
        CAPTURE(family_name(original.family));
        const GHParams standard = standardize(original);
        CHECK(standard.family == original.family);
        const GHMoments m = moments(standard);
        CHECK(m.mean == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
        CHECK(m.variance == doctest::Approx(1.0).epsilon(1e-10));

        // Standardization is the affine map z = (x - mean) / sd, so the
        // distribution functions must agree through that change of variables.
        const GHMoments orig = moments(original);
        const double sd = std::sqrt(orig.variance);
        for (double z : {-2.0, -0.5, 0.0, 0.7, 1.9}) {
            const double x = orig.mean + sd * z;
            CHECK(cdf(standard, z) == doctest::Approx(cdf(original, x)).epsilon(1e-8));
            CHECK(log_pdf(standard, z) ==
                  doctest::Approx(log_pdf(original, x) + std::log(sd)).epsilon(1e-8));
        }
    }
}
