#pragma once

#include <cstdint>
#include <random>

namespace hvmax::rng {

// splitmix64 finalizer. Used to decorrelate seeds derived from a master seed;
// mt19937_64 seeded with nearby integers produces correlated early output.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-stream seed for (master, purpose tag, index).
/// Every consumer of randomness owns a distinct tag so adding draws to one
/// stage can never shift the draws seen by another.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    return mix64(mix64(master ^ mix64(tag)) + index);
}

// purpose tags (arbitrary distinct constants)
inline constexpr std::uint64_t kInitTag    = 0x696e6974ULL;  // parameter init
inline constexpr std::uint64_t kShuffleTag = 0x7368756cULL;  // epoch shuffles
inline constexpr std::uint64_t kNoiseTag   = 0x6e6f6973ULL;  // input corruption
inline constexpr std::uint64_t kDataTag    = 0x64617461ULL;  // dataset synthesis
inline constexpr std::uint64_t kCheckTag   = 0x6368656bULL;  // test fixtures

/// mt19937_64 wrapped with a fixed 53-bit uniform mapper. The mapping is part
/// of the reproducibility contract: distributions from <random> are
/// implementation-defined, the raw engine is not.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    /// uniform double in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [0, n), n >= 1
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n));
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace hvmax::rng
