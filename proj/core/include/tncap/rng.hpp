#pragma once

#include <cmath>
#include <cstdint>

namespace tncap::rng {

// Stateless counter-based generator. Every draw is a hash of
// (seed, stream, counter), so per-link streams never perturb each other and
// traces are bit-reproducible regardless of evaluation order.

constexpr std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t draw(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
    return mix(seed ^ mix(stream ^ mix(counter)));
}

// Uniform on (0,1); never returns 0 or 1, safe under log transforms.
inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t counter) {
    return (static_cast<double>(draw(seed, stream, counter) >> 11) + 0.5) *
           0x1.0p-53;
}

inline bool bernoulli(double p, std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t counter) {
    return uniform(seed, stream, counter) < p;
}

inline double exponential(double rate, std::uint64_t seed,
                          std::uint64_t stream, std::uint64_t counter) {
    return -std::log(uniform(seed, stream, counter)) / rate;
}

// Sequential draws from one stream.
struct Stream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    double uniform() { return rng::uniform(seed, stream, counter++); }
    bool bernoulli(double p) { return uniform() < p; }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
};

}  // namespace tncap::rng
