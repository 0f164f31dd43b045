#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic random number helpers. Streams must be reproducible across
// platforms, so we avoid std::uniform_real_distribution / std::normal_distribution
// (their output is implementation defined) and build everything from the raw
// mt19937_64 bit stream.

namespace shus {

// Uniform draw on the half-open interval (0, 1]. Zero is excluded so that
// log(u) is always finite; u = 1 is reachable and makes log(u) = 0, which is
// needed for the "log acceptance >= 0 always accepts" contract.
inline double uniform_open_closed(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// One Box-Muller pair. Consumes exactly two uniforms per call regardless of
// the values drawn, which keeps the stream layout fixed (3 draws per MH step).
inline void normal_pair(std::mt19937_64& rng, double& z1, double& z2) {
    const double u1 = uniform_open_closed(rng);
    const double u2 = uniform_open_closed(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    z1 = r * std::cos(t);
    z2 = r * std::sin(t);
}

// Counter-based replica seed: splitmix64 mix of (master + (index+1) * golden
// gamma). Replica streams are decorrelated without advancing a shared state,
// so replica r's seed does not depend on how many replicas ran before it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace shus
