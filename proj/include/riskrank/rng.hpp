#pragma once

#include <cmath>
#include <cstdint>

namespace riskrank {

// Counter-based generator (splitmix64). Streams are forked by hashing
// identifiers into a fresh state, so a draw depends only on its keys and
// never on which thread produced it or how many draws preceded it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Modulo bias is below 2^-32 for the n used here.
    std::uint64_t uniform_below(std::uint64_t n) { return next_u64() % n; }

    // Exponential with the given mean via inverse CDF; reproducible everywhere.
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Derive a child stream from this stream's seed and a key.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// FNV-1a over bytes; used to key click streams by document id.
inline std::uint64_t hash_string(const char* data, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace riskrank
