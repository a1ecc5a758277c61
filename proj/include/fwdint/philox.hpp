#pragma once

#include <cmath>
#include <cstdint>

namespace fwdint {

/// Philox4x32-10 counter-based generator.
///
/// Each (key, counter) pair maps to 128 independent random bits through a
/// fixed 10-round bijection, so a draw is addressable: given the same key
/// = (seed, stream) and the same counter, the output is identical no matter
/// which thread asks for it, in which order. That is the whole point — path
/// generation stays bit-reproducible under any parallel schedule.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    struct Block {
        std::uint32_t x[4];
    };

    static Block run(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
                     std::uint32_t c2, std::uint32_t c3) {
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return Block{{c0, c1, c2, c3}};
    }
};

/// Uniform double in (0, 1], built from 64 bits so that log(u) is finite.
inline double uniform_from_bits(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits + 1) * 0x1p-64;
}

/// Standard normal draw addressed by (seed, stream, index).
///
/// One Philox block yields two uniforms; Box-Muller turns them into a
/// Gaussian. The sine branch is discarded to keep the draw a pure function
/// of its address.
inline double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto b = Philox4x32::run(seed,
                                   static_cast<std::uint32_t>(stream),
                                   static_cast<std::uint32_t>(stream >> 32),
                                   static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32));
    const double u1 = uniform_from_bits(b.x[0], b.x[1]);
    const double u2 = uniform_from_bits(b.x[2], b.x[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

/// Uniform draw in [0,1) addressed the same way, for test generators.
inline double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto b = Philox4x32::run(seed,
                                   static_cast<std::uint32_t>(stream),
                                   static_cast<std::uint32_t>(stream >> 32),
                                   static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32));
    return uniform_from_bits(b.x[0], b.x[1]) - 0x1p-64;
}

} // namespace fwdint
