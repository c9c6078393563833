#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace sgdkit {

// PCG32 (XSH-RR output, 64-bit LCG state). Chosen over <random> engines
// because the standard leaves distribution algorithms unspecified; every
// draw here is pinned down bit-for-bit so corpora reproduce across
// platforms and compilers. Constants are the reference pcg32 ones.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(0), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on [0, n), unbiased via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        if (n == 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Inclusive bounds.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return unit() < p;
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        if (items.empty()) throw std::invalid_argument("Rng::pick: empty set");
        return items[below(items.size())];
    }

    // Deterministic sub-seed for work unit `index`; splitmix64 finalizer.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

// FNV-1a 64-bit; used for content fingerprints and flow-signature digests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace sgdkit
