#pragma once

// Counter-based random streams.
//
// Philox4x32-10 (Salmon, Moraes, Dror, Shaw: "Parallel random numbers: as
// easy as 1, 2, 3", SC'11). The 64-bit master seed is the key, the stream
// index fills the upper half of the 128-bit counter and the lower half counts
// blocks. Two streams with different (master, stream) pairs never share a
// counter, so trials can be generated in any order on any number of threads.

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace itree {

struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    /// Child seed for an independent sub-stream (e.g. one restart of a
    /// search inside trial `stream`). Deterministic in (master, stream, tag).
    [[nodiscard]] Seed derive(std::uint64_t tag) const noexcept;

    friend bool operator==(const Seed&, const Seed&) = default;
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

inline Seed Seed::derive(std::uint64_t tag) const noexcept {
    return Seed{detail::splitmix64(master ^ detail::splitmix64(stream + 0x632BE59BD9B4E019ULL)), tag};
}

/// Raw Philox4x32-10 block function.
inline constexpr std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                            std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t M0 = 0xD2511F53u;
    constexpr std::uint32_t M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

/// Sequential view over one Philox stream. Satisfies
/// std::uniform_random_bit_generator, but the project's own helpers
/// (uniform01, below, shuffle) should be preferred: the std distributions
/// are implementation-defined and would break cross-platform reproducibility.
class Rng {
public:
    using result_type = std::uint32_t;

    explicit Rng(Seed seed) noexcept
        : key_{static_cast<std::uint32_t>(seed.master), static_cast<std::uint32_t>(seed.master >> 32)},
          stream_lo_(static_cast<std::uint32_t>(seed.stream)),
          stream_hi_(static_cast<std::uint32_t>(seed.stream >> 32)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 4) refill();
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Uniform integer in [0, bound); bound must be positive. Lemire's
    /// multiply-and-reject method, unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= (std::uint64_t{1} << 32)) {
            const auto b32 = bound;
            std::uint64_t m = std::uint64_t{(*this)()} * b32;
            auto low = static_cast<std::uint32_t>(m);
            if (low < b32) {
                const auto threshold = static_cast<std::uint32_t>((std::uint64_t{1} << 32) % b32);
                while (low < threshold) {
                    m = std::uint64_t{(*this)()} * b32;
                    low = static_cast<std::uint32_t>(m);
                }
            }
            return m >> 32;
        }
        // Wide bounds are rare (only huge index spaces); plain rejection.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    void refill() noexcept {
        buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                 stream_lo_, stream_hi_},
                                key_);
        ++block_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    std::size_t pos_ = 4;
};

}  // namespace itree
