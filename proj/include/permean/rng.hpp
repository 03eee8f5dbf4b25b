#pragma once

#include <cstdint>
#include <random>

namespace permean::rng {

// SplitMix64 finalizer (Steele/Lea/Flood). Used to turn user seeds and
// stream indices into well-mixed engine seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for logical stream `stream` of user seed `seed`. Stream 0 is the
// single-sample stream; Monte-Carlo chunk c uses stream c+1. The mapping
// is part of the tool's reproducibility contract.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL * stream);
}

// mt19937_64 with explicit, platform-independent output mappings:
// u01() takes the top 53 bits, below(m) is the 128-bit multiply-shift
// range map. std::* distributions are avoided on purpose - they are not
// specified bit-exactly.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : gen_(seed) {}

    double u01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t below(std::uint64_t m) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * m) >> 64);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace permean::rng
