#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tempdyn/rng.hpp"

namespace tempdyn {

enum class GHFamily { gh, nig, hyp, vg, normal };

std::string family_name(GHFamily family);
GHFamily family_from_name(const std::string& name); // throws validation_error

// Parameters of the generalized hyperbolic family
//   f(x) ~ (delta^2 + (x-mu)^2)^(nu/2 - 1/4) e^{beta (x-mu)}
//          K_{nu-1/2}(alpha sqrt(delta^2 + (x-mu)^2))
// and its special cases: NIG (nu = -1/2), HYP (nu = 1), VG (delta = 0,
// nu > 0), and Normal (mu = mean, delta = standard deviation; nu, alpha,
// beta unused).
struct GHParams {
    GHFamily family = GHFamily::normal;
    double nu = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double delta = 1.0;
};

GHParams make_gh(double nu, double alpha, double beta, double mu, double delta);
GHParams make_nig(double alpha, double beta, double mu, double delta);
GHParams make_hyp(double alpha, double beta, double mu, double delta);
GHParams make_vg(double nu, double alpha, double beta, double mu);
GHParams make_normal(double mean, double stddev);

// Throws validation_error naming the violated constraint. Enforced domain:
// alpha > 0, |beta| < alpha, delta > 0 (delta = 0 and nu > 0 for VG),
// nu fixed at -1/2 for NIG and 1 for HYP, stddev > 0 for Normal.
void validate(const GHParams& params);

// Log density, computed in log space throughout so that deep-tail values are
// finite. The VG density at exactly x = mu is infinite for nu <= 1/2 (an
// integrable singularity); log_pdf returns +infinity there, and the finite
// limit value for nu > 1/2.
double log_pdf(const GHParams& params, double x);
double pdf(const GHParams& params, double x);

// Distribution function by adaptive quadrature of the density (closed form
// for the Normal family). Accurate to about 1e-8 absolute; throws
// numeric_error with the achieved tolerance if refinement stalls.
double cdf(const GHParams& params, double x);

// Batch cdf at ascending points, integrating each gap once instead of
// restarting from the lower tail (much faster for goodness-of-fit sweeps).
// Throws validation_error if xs is not sorted ascending.
std::vector<double> cdf_sorted(const GHParams& params, const std::vector<double>& xs);

// Moment generating function; z must satisfy |beta + z| < alpha (any z for
// the Normal family), otherwise validation_error names the bound.
double mgf(const GHParams& params, double z);

struct GHMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Analytic mean and variance via the normal mean-variance mixture
// representation (Bessel-ratio moments of the mixing distribution).
GHMoments moments(const GHParams& params);

// Affine rescaling to zero mean and unit variance. Every family here is
// closed under affine maps, so the result is an exact reparametrization of
// the same law.
GHParams standardize(const GHParams& params);

// Exact draws through the mixture representation X = mu + beta W + sqrt(W) Z
// with W generalized-inverse-Gaussian; deterministic given the generator
// state or seed.
double sample_one(const GHParams& params, Rng& rng);
std::vector<double> sample(const GHParams& params, std::size_t n, std::uint64_t seed);

} // namespace tempdyn
