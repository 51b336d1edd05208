#ifndef HGSTS_RNG_HPP
#define HGSTS_RNG_HPP

#include <cstdint>
#include <cmath>
#include <string_view>

namespace hgsts {

// All randomness in the library flows from a single user seed through named
// substreams, so runs are reproducible byte-for-byte regardless of the
// standard library in use (std distributions are implementation-defined).

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256++ core.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, bound) by rejection; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t x = next_u64();
        while (x > limit) x = next_u64();
        return x % bound;
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    // Permutes indices 0..n-1 into out (Fisher-Yates).
    template <typename Vec>
    void shuffle(Vec& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Derives independent named substreams from one master seed.
class SeedSequence {
public:
    explicit SeedSequence(std::uint64_t master) : master_(master) {}

    Rng stream(std::string_view name, std::uint64_t index = 0) const {
        std::uint64_t st = master_ ^ (0x632be59bd9b4e019ULL + fnv1a64(name));
        std::uint64_t a = splitmix64(st);
        st ^= index * 0x9e3779b97f4a7c15ULL;
        std::uint64_t b = splitmix64(st);
        return Rng(a ^ (b * 0xda942042e4dd58b5ULL) ^ index);
    }

    std::uint64_t master() const { return master_; }

private:
    std::uint64_t master_;
};

} // namespace hgsts

#endif
