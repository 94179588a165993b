#pragma once

#include <complex>
#include <cstdint>

namespace dilatron {

// Counter-based pseudo-random stream: the i-th output is
// mix64(seed + (i+1) * GOLDEN_GAMMA), the splitmix64 output function applied
// to an affine counter. The stream is a pure function of (seed, i), so
// samples are reproducible across platforms and trivially seekable, and
// derived streams never share state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53-bit resolution.
    double next_double();

    // Uniform on [0,1]; never returns 0 (safe under log).
    double next_double_open();

    // Unbiased uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);

    // Standard real Gaussian via Box-Muller (one draw per two uniforms).
    double next_gaussian();

    // Re + i*Im with independent standard Gaussian parts.
    std::complex<double> next_complex_gaussian();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

// Documented seed-splitting rule: the child stream for (master, index) is
// seeded with mix64(master XOR mix64(index + GOLDEN_GAMMA)). Children of the
// same master are decorrelated from each other and from the master stream.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace dilatron
