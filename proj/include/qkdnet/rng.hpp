// rng.hpp
// Counter-based random source with labeled substreams.
//
// Output i of a stream is a pure function of (key, i), so replay is exact no
// matter in which order modules consume their draws. Substreams fold a text
// label into the key.

#pragma once

#include <cstdint>
#include <string_view>

namespace qkdnet {

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : key_(seed) {}

    // Derive an independent stream identified by a fixed label.
    RandomSource substream(std::string_view label) const;

    std::uint64_t next_u64();
    double next_unit();                          // uniform in [0, 1)
    int next_bit();
    std::uint64_t next_below(std::uint64_t n);   // uniform in [0, n), n >= 1

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qkdnet
