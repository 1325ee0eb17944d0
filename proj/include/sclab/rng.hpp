#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sclab {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Stateless: output is a pure function of (counter, key), which makes
// every (seed, trajectory, step, mode) stream independently addressable.
namespace philox {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    lo = static_cast<uint32_t>(p);
    hi = static_cast<uint32_t>(p >> 32);
}

inline std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    constexpr uint32_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
    constexpr uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
        uint32_t lo0, hi0, lo1, hi1;
        mulhilo(M0, ctr[0], lo0, hi0);
        mulhilo(M1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

// standard normal from the (seed, traj, step, mode) cell via Box-Muller
inline double normal(uint64_t seed, uint64_t traj, uint32_t step, uint32_t mode) {
    std::array<uint32_t, 4> ctr = {step, mode, static_cast<uint32_t>(traj),
                                   static_cast<uint32_t>(traj >> 32)};
    std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                   static_cast<uint32_t>(seed >> 32)};
    auto out = block(ctr, key);
    double u1 = (out[0] + 1.0) * (1.0 / 4294967296.0);  // (0,1]
    double u2 = out[1] * (1.0 / 4294967296.0);          // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
}

// derived per-trajectory seed for (master_seed, index)
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(index),
                                   static_cast<uint32_t>(index >> 32), 0x5c1ab001u, 0u};
    std::array<uint32_t, 2> key = {static_cast<uint32_t>(master),
                                   static_cast<uint32_t>(master >> 32)};
    auto out = block(ctr, key);
    return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace philox

namespace stochastic {

/// Wiener increments for one trajectory: increments[step][mode] ~ N(0, dt),
/// reproducible from (seed, step, mode) alone.
struct NoisePath {
    uint64_t seed = 0;
    double dt = 0;
    int K = 0;
    std::vector<double> increments;  // step-major

    double at(int step, int mode) const {
        return increments[static_cast<std::size_t>(step) * K + mode];
    }
};

inline NoisePath sample_increments(uint64_t seed, int steps, int K, double dt,
                                   uint64_t traj = 0) {
    if (steps < 1 || K < 1 || !(dt > 0))
        throw std::invalid_argument("sample_increments: steps >= 1, K >= 1, dt > 0");
    NoisePath p;
    p.seed = seed;
    p.dt = dt;
    p.K = K;
    p.increments.resize(static_cast<std::size_t>(steps) * K);
    double s = std::sqrt(dt);
    for (int j = 0; j < steps; ++j)
        for (int k = 0; k < K; ++k)
            p.increments[static_cast<std::size_t>(j) * K + k] =
                s * philox::normal(seed, traj, static_cast<uint32_t>(j),
                                   static_cast<uint32_t>(k));
    return p;
}

}  // namespace stochastic
}  // namespace sclab
