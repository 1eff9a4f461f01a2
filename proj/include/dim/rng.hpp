#pragma once

#include <cmath>
#include <cstdint>

namespace dim {

// splitmix64: tiny, seedable, reproducible across platforms. Each consumer
// (one per lane and purpose) gets its own stream derived from the scenario
// seed so draws never interleave between lanes.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential with the given rate (events per second).
    double next_exponential(double rate) {
        double u = next_double();
        if (u >= 1.0) u = 0.9999999999999999;
        return -std::log(1.0 - u) / rate;
    }

private:
    uint64_t state_;
};

// Stream derivation: hash the (seed, purpose, lane) triple through one
// splitmix64 round each so streams are decorrelated.
inline uint64_t derive_stream_seed(uint64_t seed, uint64_t purpose, uint64_t lane) {
    RngStream mix(seed ^ (purpose * 0xd6e8feb86659fd93ULL) ^ (lane * 0xa5a5a5a5a5a5a5a5ULL));
    mix.next_u64();
    return mix.next_u64();
}

} // namespace dim
