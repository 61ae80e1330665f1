// protocol.hpp
// BB84 encoding, the correlation and sifting rules of the time-reversed EPR
// scheme, and raw-length accounting.

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qkdnet/common.hpp"
#include "qkdnet/qcore.hpp"
#include "qkdnet/rng.hpp"

namespace qkdnet {

struct BB84Record {
    int bit = 0;
    Basis basis = Basis::Z;
    QubitState state;
};

enum class Relation { Correlated, Anticorrelated };

enum class SiftVariant { SingletOnly, FullBell };

struct SiftedKey {
    BitString bits;
    std::vector<std::size_t> source_indices;  // strictly increasing pair indices
};

// (0,Z) -> |up>, (1,Z) -> |down>, (0,X) -> |left>, (1,X) -> |right>
QubitState encode_bb84(int bit, Basis basis);

BB84Record random_bb84(RandomSource& rng);

// Relation between the two users' prepared bits given the announced Bell
// outcome, valid when both used the same basis.
Relation relation(BellOutcome outcome, Basis basis);

// Keeps indices where an announcement is present and the bases match. Bob's
// key is his raw bits; Alice's is her raw bits flipped wherever the relation
// says anticorrelated, so under an honest noiseless center the keys agree.
std::pair<SiftedKey, SiftedKey> sift(const std::vector<BB84Record>& alice,
                                     const std::vector<BB84Record>& bob,
                                     const std::vector<std::optional<BellOutcome>>& announcements,
                                     SiftVariant variant);

// Smallest raw length satisfying the strict bounds L' > 8(L+l) (singlet
// variant) and L' > 2(L+l) (full Bell variant).
std::size_t required_raw_length(std::size_t key_len, std::size_t wasted, SiftVariant variant);

}  // namespace qkdnet
