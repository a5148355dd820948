#pragma once

#include <cstdint>

namespace fmkt {

// splitmix64 finalizer; used to derive independent per-round / per-point
// seeds from a single master seed.
inline std::uint64_t mix_bits(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_bits(mix_bits(a) ^ (b * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

}  // namespace fmkt
