#pragma once

// Deterministic, platform-independent random source: xoshiro256++ state
// seeded through splitmix64 from a (seed, stream) pair. Distinct streams
// from one seed are independent for Monte Carlo purposes, which is how the
// experiment harness gives every replicate its own reproducible generator.
// Variate transforms are done by explicit inverse CDFs so that results do
// not depend on the standard library implementation.

#include <cstdint>

namespace hnrmi {

class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double next_double();

    // Uniform on (0, 1), endpoints excluded; safe for quantile transforms.
    double uniform_open();

    // Standard normal by inversion.
    double normal();

    // Index in [0, n) with equal probability.
    int uniform_int(int n);

private:
    uint64_t s_[4];
};

// Deterministic seed derivation for sub-studies: mixes a salt into a master
// seed so that different study configurations get unrelated streams.
uint64_t mix_seed(uint64_t seed, uint64_t salt);

}  // namespace hnrmi
