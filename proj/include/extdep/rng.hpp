#pragma once

#include <cstdint>
#include <string_view>

namespace extdep {

// ---------------------------------------------------------------------------
// Counter-based random streams.
//
// Every stream is a (key, counter) pair over the splitmix64 output function:
// draw i of stream `key` is mix(key + i * GAMMA). Streams derived from the
// same parent with distinct ids never share state, so work can be fanned out
// across threads and still reproduce bit-for-bit in any execution order.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Vigna); bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// FNV-1a, used to fold asset identifiers into stream keys.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

class RandomStream {
public:
    explicit constexpr RandomStream(std::uint64_t key) noexcept : key_(key) {}

    // Child stream for a given id; children of one parent are pairwise
    // distinct and independent of the parent's own draw position.
    constexpr RandomStream substream(std::uint64_t id) const noexcept {
        return RandomStream(detail::mix64(key_ ^ detail::mix64(id + detail::kGoldenGamma)));
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64() noexcept {
        counter_ += detail::kGoldenGamma;
        return detail::mix64(key_ + counter_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1); rejects the (astronomically rare) zero draw.
    double next_open_unit() noexcept {
        double u = next_unit();
        while (u == 0.0) u = next_unit();
        return u;
    }

    // Unbiased draw from {0, ..., n-1} (Lemire's multiply-reject method).
    std::uint64_t next_below(std::uint64_t n) noexcept {
        unsigned __int128 prod = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(prod);
        if (lo < n) {
            const std::uint64_t cutoff = (0u - n) % n;
            while (lo < cutoff) {
                prod = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace extdep
