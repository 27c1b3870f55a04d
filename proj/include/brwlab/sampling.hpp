#pragma once

#include <cstdint>

#include "brwlab/rng.hpp"

namespace brwlab {

// Exponential with the given mean.
double sample_exponential(Rng& rng, double mean);

// Poisson: product-of-uniforms for small means, transformed rejection (PTRS)
// for large ones. Exact for all means.
std::uint64_t sample_poisson(Rng& rng, double mean);

// Binomial(n, p): CDF inversion for small n*p, transformed rejection (BTRS)
// for large. Exact for all (n, p).
std::uint64_t sample_binomial(Rng& rng, std::uint64_t n, double p);

// Gamma(shape, scale), Marsaglia-Tsang squeeze.
double sample_gamma(Rng& rng, double shape, double scale);

// Geometric on {0,1,2,...} with pmf 2^-(k+1): the run length of leading one
// bits in a uniform word, which is exact and branch-light.
std::uint64_t sample_geometric_half(Rng& rng);

// Sum of r independent geometric-half draws (negative binomial), sampled in
// O(1) through its gamma-Poisson mixture.
std::uint64_t sample_negative_binomial_half(Rng& rng, std::uint64_t r);

}  // namespace brwlab
