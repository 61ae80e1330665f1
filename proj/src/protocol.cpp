#include "qkdnet/protocol.hpp"

namespace qkdnet {

QubitState encode_bb84(int bit, Basis basis) { return basis_state(basis, bit); }

BB84Record random_bb84(RandomSource& rng) {
    BB84Record r;
    r.bit = rng.next_bit();
    r.basis = rng.next_bit() ? Basis::X : Basis::Z;
    r.state = encode_bb84(r.bit, r.basis);
    return r;
}

Relation relation(BellOutcome outcome, Basis basis) {
    switch (outcome) {
        case BellOutcome::PsiMinus:
            return Relation::Anticorrelated;  // both bases
        case BellOutcome::PsiPlus:
            return basis == Basis::Z ? Relation::Anticorrelated : Relation::Correlated;
        case BellOutcome::PhiPlus:
            return Relation::Correlated;  // both bases
        case BellOutcome::PhiMinus:
            return basis == Basis::Z ? Relation::Correlated : Relation::Anticorrelated;
    }
    return Relation::Correlated;  // unreachable
}

std::pair<SiftedKey, SiftedKey> sift(const std::vector<BB84Record>& alice,
                                     const std::vector<BB84Record>& bob,
                                     const std::vector<std::optional<BellOutcome>>& announcements,
                                     SiftVariant variant) {
    if (alice.size() != bob.size() || alice.size() != announcements.size()) {
        throw LengthMismatch("sift inputs have different lengths");
    }
    SiftedKey key_a, key_b;
    for (std::size_t i = 0; i < alice.size(); ++i) {
        const auto& ann = announcements[i];
        if (!ann.has_value()) continue;
        if (variant == SiftVariant::SingletOnly && *ann != BellOutcome::PsiMinus) {
            throw LengthMismatch("singlet-only session announced a non-singlet outcome");
        }
        if (alice[i].basis != bob[i].basis) continue;
        int a_bit = alice[i].bit;
        if (relation(*ann, alice[i].basis) == Relation::Anticorrelated) a_bit ^= 1;
        key_a.bits.push_back(static_cast<std::uint8_t>(a_bit));
        key_a.source_indices.push_back(i);
        key_b.bits.push_back(static_cast<std::uint8_t>(bob[i].bit));
        key_b.source_indices.push_back(i);
    }
    return {std::move(key_a), std::move(key_b)};
}

std::size_t required_raw_length(std::size_t key_len, std::size_t wasted, SiftVariant variant) {
    const std::size_t factor = variant == SiftVariant::SingletOnly ? 8 : 2;
    return factor * (key_len + wasted) + 1;
}

}  // namespace qkdnet
