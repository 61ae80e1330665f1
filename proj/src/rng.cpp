#include "qkdnet/rng.hpp"

namespace qkdnet {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RandomSource RandomSource::substream(std::string_view label) const {
    return RandomSource(mix(fnv1a(key_ ^ 0xcbf29ce484222325ULL, label)));
}

std::uint64_t RandomSource::next_u64() {
    return mix(key_ + kGolden * ++counter_);
}

double RandomSource::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int RandomSource::next_bit() {
    return static_cast<int>(next_u64() >> 63);
}

std::uint64_t RandomSource::next_below(std::uint64_t n) {
    // rejection sampling over the largest multiple of n
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

}  // namespace qkdnet
