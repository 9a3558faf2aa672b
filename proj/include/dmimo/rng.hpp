// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace dmimo {

/// 64-bit finalizer from SplitMix64. Bijective.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Purpose tag of a random substream. Part of the stream key, so the draws
/// feeding device placement, channel fading and CSI errors never interleave.
enum class StreamPurpose : std::uint64_t {
    kPlacement = 1,
    kChannel = 2,
    kCsiError = 3,
    kDevicePair = 4,
    kTest = 99,
};

/// Counter-based random substream: output i is a hash of (key, i), where the
/// key is derived from (master seed, purpose, geometry index, channel index).
/// Consuming a stream is therefore independent of every other stream and of
/// thread scheduling; the same key always replays the same sequence.
class Stream {
  public:
    Stream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t geo_index = 0,
           std::uint64_t draw_index = 0)
        : key_(derive_key(master_seed, purpose, geo_index, draw_index)) {}

    std::uint64_t next_u64() {
        return mix64(key_ ^ mix64(counter_++ + 0x9E3779B97F4A7C15ULL));
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [0, length).
    double uniform(double length) { return uniform01() * length; }

    /// One standard complex normal CN(0,1) via Box-Muller; consumes two words.
    std::complex<double> normal_complex() {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-std::log(u1));  // E[r^2] = 1 split across re/im
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// One standard real normal N(0,1). Consumes two words (no caching, so the
    /// word count per draw is fixed and replay-stable).
    double normal() {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Words consumed so far; used to assert common-random-number discipline.
    std::uint64_t draws() const { return counter_; }

    static std::uint64_t derive_key(std::uint64_t seed, StreamPurpose purpose,
                                    std::uint64_t geo_index, std::uint64_t draw_index) {
        std::uint64_t k = mix64(seed + 0x2545F4914F6CDD1DULL);
        k = mix64(k + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(purpose));
        k = mix64(k + 0xD1B54A32D192ED03ULL * (geo_index + 1));
        k = mix64(k + 0x8CB92BA72F3D8DD7ULL * (draw_index + 1));
        return k;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace dmimo
