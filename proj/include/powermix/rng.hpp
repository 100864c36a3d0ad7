#pragma once

#include <cstdint>
#include <limits>

namespace powermix {

//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream.
 *
 * Draw i of a stream is a pure function of (key, i): the SplitMix64 output
 * finalizer applied to key + (i+1)·γ. Streams are cheap values; split()
 * derives an independent child key so parallel Monte Carlo can hand each
 * worker its own stream and still reproduce bit-identical results.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class Stream {
  public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t seed) noexcept : key_(mix(seed ^ kSeedSalt)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform_open() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Independent child stream; children of the same parent with distinct
    /// ids never share keys. The parent is left untouched.
    Stream split(std::uint64_t child_id) const noexcept {
        return Stream(Key{mix(key_ ^ mix(child_id * kGamma + kSplitSalt))});
    }

    /// Skip ahead by `count` draws.
    void discard(std::uint64_t count) noexcept { counter_ += count; }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t position() const noexcept { return counter_; }

  private:
    struct Key {
        std::uint64_t value;
    };
    explicit Stream(Key k) noexcept : key_(k.value) {}

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kSeedSalt = 0x5851F42D4C957F2DULL;
    static constexpr std::uint64_t kSplitSalt = 0xD1B54A32D192ED03ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace powermix
