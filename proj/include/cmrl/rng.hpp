#pragma once

#include <cstdint>
#include <random>

namespace cmrl {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent child seeds from a
// (seed, index) pair so parallel workers replay identically.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(mix_seed(seed, stream));
}

// Samples an index from a discrete distribution given by `probs` (assumed to
// sum to 1). Uses a single uniform draw; the trailing index absorbs rounding.
template <typename Container>
int sample_index(const Container& probs, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
        acc += probs[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

} // namespace cmrl
