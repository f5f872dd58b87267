#ifndef POSTVRP_RANDOM_HPP
#define POSTVRP_RANDOM_HPP

#include <cstdint>

namespace postvrp {

/**
 * splitmix64 stream.
 *
 * Only integer arithmetic is involved, so the stream is bit-identical on
 * every platform and trivially portable to other languages. Instances are
 * regenerated from (model, seed, n), which makes this the root of instance
 * identity: never change the constants.
 */
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    constexpr std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    constexpr double next_unit() noexcept { return unit_from_bits(next_u64()); }

    static constexpr double unit_from_bits(std::uint64_t bits) noexcept {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

    // UniformRandomBitGenerator interface, for use with <algorithm>.
    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }
    constexpr std::uint64_t operator()() noexcept { return next_u64(); }

    friend constexpr bool operator==(const SplitMix64&, const SplitMix64&) = default;

private:
    std::uint64_t state_;
};

}

#endif
