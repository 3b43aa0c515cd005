#pragma once
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace gml {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent stream key for (seed, trial, tag).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(tag + 0x5851F42D4C957F2Dull)) ^ trial);
}

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).  The key picks
// the stream, the counter walks through it, so trial streams never overlap.
class Philox {
public:
    using result_type = std::uint32_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    explicit Philox(std::uint64_t key) : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

    result_type operator()() {
        if (idx_ == 4) refill();
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    // uniform on (0,1), 53 random bits
    double uniform() { return ((next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Box-Muller; the second variate is cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform()); }

private:
    void refill() {
        std::array<std::uint32_t, 4> c = ctr_;
        std::array<std::uint32_t, 2> k = key_;
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        out_ = c;
        idx_ = 0;
        if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_{0, 0, 0, 0};
    std::array<std::uint32_t, 4> out_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gml
