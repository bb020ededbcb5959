#pragma once

// Deterministic random number streams.
//
// Generator: xoshiro256++ seeded through SplitMix64. Replicate r of a run
// with master seed s draws from the stream keyed by (s, r); streams are
// derived independently, so replicate fan-out needs no coordination and
// results do not depend on worker count or scheduling. The draw order of
// every consumer is fixed, which is what makes trajectories reproducible
// bit-for-bit from (seed, replicate, params, init).

#include <cmath>
#include <cstdint>

namespace dcp {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        // Fold the stream id into the SplitMix64 state so (seed, id) pairs
        // land far apart even for consecutive ids.
        std::uint64_t sm = seed ^ (0xD1B54A32D192ED03ULL * (stream_id + 1));
        for (auto& w : state_) w = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log argument.
    double next_double_pos() {
        return 1.0 - next_double();
    }

    // Exponential waiting time with the given total rate.
    double next_exponential(double rate) {
        return -std::log(next_double_pos()) / rate;
    }

    // Uniform index in [0, n).
    std::uint64_t next_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::uint64_t state_[4];
};

}  // namespace dcp
