#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tempdyn/errors.hpp"
#include "tempdyn/rng.hpp"
#include "tempdyn/special.hpp"
#include "tempdyn/stats.hpp"

using namespace tempdyn;

namespace {

std::vector<double> normal_draws(Rng& r, std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out)
        x = r.normal();
    return out;
}

double rejection_rate(int replicates, double alpha,
                      const std::function<TestResult(Rng&)>& run, std::uint64_t seed) {
    int rejections = 0;
    for (int rep = 0; rep < replicates; ++rep) {
        Rng r = Rng::substream(seed, std::uint64_t(rep));
        const TestResult t = run(r);
        REQUIRE(t.p_value.has_value());
        if (*t.p_value < alpha)
            ++rejections;
    }
    return double(rejections) / double(replicates);
}

// Fisher-Yates shuffle driven by our deterministic rng.
void shuffle_values(std::vector<double>& xs, Rng& r) {
    for (std::size_t i = xs.size(); i > 1; --i)
        std::swap(xs[i - 1], xs[std::size_t(double(i) * r.uniform())]);
}

} // namespace

TEST_CASE("pearson chi2 accepts quantile-midpoint data and rejects uniforms") {
    const std::size_t n = 1000;
    std::vector<double> midpoints(n);
    for (std::size_t i = 0; i < n; ++i)
        midpoints[i] = norm_quantile((double(i) + 0.5) / double(n));
    const TestResult good = pearson_chi2_normal(midpoints, 50);
    CHECK(good.statistic < 5.0);
    CHECK(*good.p_value > 0.999);

    Rng r(41);
    std::vector<double> uniforms(10000);
    for (auto& x : uniforms)
        x = r.uniform();
    const TestResult bad = pearson_chi2_normal(uniforms, 50);
    CHECK(*bad.p_value < 0.01);
    const auto at01 = std::find_if(bad.reject_at.begin(), bad.reject_at.end(),
                                   [](const AlphaDecision& d) { return d.alpha == 0.01; });
    REQUIRE(at01 != bad.reject_at.end());
    CHECK(at01->reject);

    CHECK_THROWS_AS(pearson_chi2_normal(std::vector<double>(100, 1.0), 50), validation_error);
}

TEST_CASE("pearson chi2 size is close to nominal on true normals") {
    const double rate = rejection_rate(
        1000, 0.05,
        [](Rng& r) { return pearson_chi2_normal(normal_draws(r, 2000), 50); }, 9001);
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

TEST_CASE("jarque-bera formula and behaviour") {
    CHECK(jarque_bera_statistic(500, 0.0, 3.0) == 0.0);
    CHECK(jarque_bera_statistic(100, 0.6, 3.0) == doctest::Approx(6.0).epsilon(1e-12));

    Rng r(42);
    // Strongly skewed data (squared normals) must reject hard.
    std::vector<double> skewed(5000);
    for (auto& x : skewed) {
        const double z = r.normal();
        x = z * z;
    }
    CHECK(*jarque_bera(skewed).p_value < 1e-6);
    CHECK_THROWS_AS(jarque_bera(std::vector<double>(5, 1.0)), validation_error);
}

TEST_CASE("jarque-bera size is close to nominal") {
    const double rate = rejection_rate(
        1000, 0.05, [](Rng& r) { return jarque_bera(normal_draws(r, 5000)); }, 9002);
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

TEST_CASE("kolmogorov-smirnov distance on plug-in quantiles") {
    const std::size_t n = 250;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = norm_quantile((double(i) + 0.5) / double(n));
    const TestResult t = kolmogorov_smirnov(xs, [](double x) { return norm_cdf(x); });
    CHECK(t.statistic == doctest::Approx(0.5 / double(n)).epsilon(1e-9));
    CHECK(*t.scaled_statistic == doctest::Approx(std::sqrt(double(n)) * 0.5 / double(n)));
}

TEST_CASE("kolmogorov-smirnov is invariant under monotone transforms") {
    Rng r(7);
    std::vector<double> xs = normal_draws(r, 500);
    const TestResult base = kolmogorov_smirnov(xs, [](double x) { return norm_cdf(x); });
    std::vector<double> ys(xs.size());
    std::transform(xs.begin(), xs.end(), ys.begin(), [](double x) { return std::exp(x); });
    const TestResult log_normal =
        kolmogorov_smirnov(ys, [](double y) { return norm_cdf(std::log(y)); });
    CHECK(log_normal.statistic == doctest::Approx(base.statistic).epsilon(1e-9));
}

TEST_CASE("kolmogorov law values and branch continuity") {
    // Classic critical points of the limit law.
    CHECK(kolmogorov_sf(1.3581) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(kolmogorov_sf(1.6276) == doctest::Approx(0.01).epsilon(2e-2));
    CHECK(std::fabs(kolmogorov_sf(1.18 - 1e-9) - kolmogorov_sf(1.18 + 1e-9)) < 1e-8);
    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK(kolmogorov_sf(8.0) < 1e-20);
}

TEST_CASE("kolmogorov-smirnov size matches the limit law") {
    const double rate = rejection_rate(
        1000, 0.05,
        [](Rng& r) {
            std::vector<double> xs(400);
            for (auto& x : xs)
                x = r.uniform();
            return kolmogorov_smirnov(xs, [](double u) { return std::clamp(u, 0.0, 1.0); });
        },
        9003);
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

TEST_CASE("anderson-darling closed-form single-sample value") {
    const TestResult t = anderson_darling({0.0}, [](double) { return 0.5; });
    CHECK(t.statistic == doctest::Approx(-1.0 + 2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("anderson-darling penalizes misordered probability values") {
    Rng r(21);
    std::vector<double> u(50);
    for (auto& v : u)
        v = norm_cdf(r.normal());
    std::sort(u.begin(), u.end());
    const double ordered = anderson_darling_statistic(u);
    for (int k = 0; k < 10; ++k) {
        std::vector<double> permuted = u;
        shuffle_values(permuted, r);
        CHECK(anderson_darling_statistic(permuted) >= ordered - 1e-12);
    }
}

TEST_CASE("anderson-darling flags clipped tails and fitted parameters") {
    Rng r(22);
    std::vector<double> xs = normal_draws(r, 100);
    xs.push_back(1e9); // cdf underflows to 1 here
    const TestResult t = anderson_darling(
        xs, [](double x) { return norm_cdf(x); }, true);
    REQUIRE(t.notes.size() == 2);
    CHECK(t.notes[0].find("clipped") != std::string::npos);
    CHECK(t.notes[1].find("approximate") != std::string::npos);
}

TEST_CASE("anderson-darling size is close to nominal") {
    const double rate = rejection_rate(
        1000, 0.05,
        [](Rng& r) {
            return anderson_darling(normal_draws(r, 1000), [](double x) { return norm_cdf(x); });
        },
        9004);
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

TEST_CASE("arch test size on homoskedastic residuals") {
    const double rate = rejection_rate(
        1000, 0.05, [](Rng& r) { return engle_arch(normal_draws(r, 1000), 12); }, 9005);
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

namespace {

std::vector<double> arch1_series(Rng& r, std::size_t n, double coeff, double omega) {
    std::vector<double> e(n);
    double prev_sq = omega / (1.0 - coeff);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = omega + coeff * prev_sq;
        e[i] = std::sqrt(h) * r.normal();
        prev_sq = e[i] * e[i];
    }
    return e;
}

} // namespace

TEST_CASE("arch test detects conditional heteroskedasticity") {
    Rng r(23);
    const std::vector<double> e = arch1_series(r, 5000, 0.9, 0.1);
    const TestResult t = engle_arch(e, 12);
    CHECK(*t.p_value < 0.01);

    // Shuffling destroys the temporal structure the statistic measures.
    std::vector<double> shuffled = e;
    shuffle_values(shuffled, r);
    const TestResult ts = engle_arch(shuffled, 12);
    CHECK(ts.statistic < 0.5 * t.statistic);
}

TEST_CASE("arch test on constant squared residuals") {
    std::vector<double> alternating(400);
    for (std::size_t i = 0; i < alternating.size(); ++i)
        alternating[i] = i % 2 == 0 ? 1.5 : -1.5;
    const TestResult t = engle_arch(alternating, 12);
    CHECK(t.statistic == 0.0);
    CHECK(*t.p_value == 1.0);
    REQUIRE_FALSE(t.notes.empty());
    CHECK_THROWS_AS(engle_arch(std::vector<double>(50, 1.0), 12), validation_error);
}

TEST_CASE("hurst exponent of white noise, trend, and affine images") {
    Rng r(24);
    const std::vector<double> noise = normal_draws(r, 10000);
    const HurstResult h = hurst_rs(noise);
    CHECK(h.exponent > 0.45);
    CHECK(h.exponent < 0.58);
    CHECK(h.window_sizes.size() >= 10);
    CHECK(h.window_sizes.front() == 32);
    CHECK(h.window_sizes.back() == 2500);

    std::vector<double> ramp(4000);
    std::iota(ramp.begin(), ramp.end(), 0.0);
    CHECK(hurst_rs(ramp).exponent > 0.95);

    std::vector<double> affine(noise.size());
    std::transform(noise.begin(), noise.end(), affine.begin(),
                   [](double x) { return -3.5 * x + 11.0; });
    CHECK(hurst_rs(affine).exponent == doctest::Approx(h.exponent).epsilon(1e-10));

    CHECK_THROWS_AS(hurst_rs(std::vector<double>(100, 0.0)), validation_error);
    CHECK_THROWS_AS(hurst_rs(std::vector<double>(1000, 2.0)), validation_error);

    // A long-memory-free shuffle of a trending series loses persistence.
    std::vector<double> trendy(8000);
    for (std::size_t i = 0; i < trendy.size(); ++i)
        trendy[i] = double(i) * 0.01 + noise[i];
    const double before = hurst_rs(trendy).exponent;
    shuffle_values(trendy, r);
    CHECK(hurst_rs(trendy).exponent < before - 0.2);
}

TEST_CASE("statistics are permutation invariant where they should be") {
    Rng r(25);
    std::vector<double> xs = normal_draws(r, 600);
    std::vector<double> shuffled = xs;
    shuffle_values(shuffled, r);

    CHECK(pearson_chi2_normal(xs, 50).statistic ==
          pearson_chi2_normal(shuffled, 50).statistic);
    CHECK(jarque_bera(xs).statistic == doctest::Approx(jarque_bera(shuffled).statistic));
    const auto cdf = [](double x) { return norm_cdf(x); };
    CHECK(kolmogorov_smirnov(xs, cdf).statistic == kolmogorov_smirnov(shuffled, cdf).statistic);
    CHECK(anderson_darling(xs, cdf).statistic == anderson_darling(shuffled, cdf).statistic);
}

TEST_CASE("decisions are monotone across significance levels") {
    Rng r(26);
    const std::vector<double> xs = normal_draws(r, 800);
    for (const TestResult& t :
         {pearson_chi2_normal(xs, 50), jarque_bera(xs),
          kolmogorov_smirnov(xs, [](double x) { return norm_cdf(x); }),
          anderson_darling(xs, [](double x) { return norm_cdf(x); }), engle_arch(xs, 12)}) {
        REQUIRE(t.p_value.has_value());
        CHECK(*t.p_value >= 0.0);
        CHECK(*t.p_value <= 1.0);
        REQUIRE(t.reject_at.size() == 3);
        CHECK(t.reject_at[0].alpha < t.reject_at[1].alpha);
        // reject at a stricter level implies reject at a looser one
        CHECK((!t.reject_at[0].reject || t.reject_at[1].reject));
        CHECK((!t.reject_at[1].reject || t.reject_at[2].reject));
    }
}
