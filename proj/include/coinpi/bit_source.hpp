#pragma once

#include <bit>
#include <cassert>
#include <cstdint>

namespace coinpi {

// 64-bit finalizer (Stafford variant 13 of the SplitMix64 mixer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace detail {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// Gamma conditioning from SplittableRandom: force odd, require enough
// bit transitions so the Weyl increment is well mixed.
constexpr std::uint64_t mix_gamma(std::uint64_t z) noexcept {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    z = (z ^ (z >> 33)) | 1ull;
    const int transitions = std::popcount(z ^ (z >> 1));
    return transitions < 24 ? z ^ 0xaaaaaaaaaaaaaaaaull : z;
}

} // namespace detail

// One substream of fair bits: a gamma-keyed Weyl sequence pushed through
// mix64, consumed LSB-first in 64-bit words. Value type, cheap to copy.
//
// The word sequence is a pure function of (state, gamma), which BitSource
// derives from (seed, stream index) with integer arithmetic only, so the
// same seed and index reproduce the same bits on any platform.
class BitStream {
public:
    BitStream(std::uint64_t state, std::uint64_t gamma) noexcept
        : state_(state), gamma_(gamma) {}

    std::uint64_t next_word() noexcept {
        state_ += gamma_;
        return mix64(state_);
    }

    bool next_bit() noexcept {
        if (buffered_ == 0) {
            buffer_ = next_word();
            buffered_ = 64;
        }
        const bool bit = buffer_ & 1ull;
        buffer_ >>= 1;
        --buffered_;
        return bit;
    }

    // Next n bits of the stream packed little-endian, 1 <= n <= 63.
    std::uint64_t next_bits(int n) noexcept {
        assert(n >= 1 && n <= 63);
        std::uint64_t out = 0;
        int got = 0;
        if (buffered_ > 0) {
            const int take = buffered_ < n ? buffered_ : n;
            out = buffer_ & ((1ull << take) - 1ull);
            buffer_ >>= take;
            buffered_ -= take;
            got = take;
        }
        if (got < n) {
            buffer_ = next_word();
            buffered_ = 64;
            const int take = n - got;
            out |= (buffer_ & ((1ull << take) - 1ull)) << got;
            buffer_ >>= take;
            buffered_ -= take;
        }
        return out;
    }

    // 53-bit uniform in [0, 1), drawn from the same bit sequence the walk
    // consumes.
    double next_uniform() noexcept {
        return static_cast<double>(next_bits(53)) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
    std::uint64_t gamma_;
    std::uint64_t buffer_ = 0;
    int buffered_ = 0;
};

// Seedable provider of independent substreams addressed by index
// (SplittableRandom-style split: per-index origin and per-index gamma).
class BitSource {
public:
    explicit BitSource(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    BitStream stream(std::uint64_t index) const noexcept {
        const std::uint64_t h = mix64(seed_ ^ (detail::kGolden * (index + 1)));
        const std::uint64_t state = mix64(h + detail::kGolden);
        const std::uint64_t gamma = detail::mix_gamma(h + 2 * detail::kGolden);
        return BitStream(state, gamma);
    }

private:
    std::uint64_t seed_;
};

} // namespace coinpi
