#pragma once

#include <cstdint>
#include <random>

namespace tempdyn {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is pinned by the C++ standard; every distribution below is an
// explicit transform of that output, so streams are bit-reproducible across
// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent stream derived from (seed, stream); used to give each
    // simulated path its own substream so adding paths never perturbs
    // previously generated ones.
    static Rng substream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double uniform();      // [0, 1), 53-bit resolution
    double uniform_open(); // (0, 1), never exactly 0 or 1
    double normal();       // inverse-CDF transform, one uniform per draw
    double exponential(double rate = 1.0);

    // Marsaglia-Tsang; shape > 0, rate > 0.
    double gamma(double shape, double rate);

    // Michael-Schucany-Haas; mean > 0, shape > 0.
    double inverse_gaussian(double mean, double shape);

    // Generalized inverse Gaussian with density ~ x^(lambda-1)
    // exp(-(chi/x + psi x)/2). Requires chi >= 0, psi >= 0 and the usual
    // edge-case sign conditions (chi > 0 if lambda <= 0, psi > 0 if
    // lambda >= 0).
    double gig(double lambda, double chi, double psi);

private:
    std::mt19937_64 engine_;

    double gig_two_param(double lambda, double omega); // chi = psi = omega
};

// SplitMix64 step; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

} // namespace tempdyn
