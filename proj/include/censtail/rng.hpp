#ifndef CENSTAIL_RNG_HPP
#define CENSTAIL_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace censtail::rng {

// splitmix64 finalizer; the mixing function behind all seed derivation.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent substream seed from (seed, stream, sub). Streams
/// are order-insensitive: any (stream, sub) pair gives the same substream no
/// matter how many other streams were consumed before it.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0) {
    return mix(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL)) ^ mix(sub + 0x9E6C63D0876A9ULL));
}

// Stream tags; one per independent consumer of randomness.
inline constexpr std::uint64_t kStreamDraw = 0x01;
inline constexpr std::uint64_t kStreamEventDraw = 0x02;
inline constexpr std::uint64_t kStreamCensorDraw = 0x03;
inline constexpr std::uint64_t kStreamBlockPlan = 0x04;
inline constexpr std::uint64_t kStreamReplicate = 0x05;
inline constexpr std::uint64_t kStreamStudySample = 0x06;
inline constexpr std::uint64_t kStreamStudyCi = 0x07;

/// Deterministic 64-bit generator. mt19937_64 is fully specified by the
/// standard, so identical seeds give identical streams on every platform;
/// doubles and bounded integers are produced here by hand because the
/// std::*_distribution adapters are implementation-defined.
class Engine {
  public:
    explicit Engine(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform on the open interval (0, 1); 53-bit resolution.
    double unit_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Unbiased uniform integer in [0, bound); bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace censtail::rng

#endif
