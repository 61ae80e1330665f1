#include "qkdnet/telenet.hpp"

#include <cmath>

namespace qkdnet {

SingletPool make_ideal_pool(CenterId a, CenterId b, std::size_t n_pairs) {
    SingletPool pool;
    pool.endpoint_a = std::move(a);
    pool.endpoint_b = std::move(b);
    pool.pairs.assign(n_pairs, bell_state(BellOutcome::PsiMinus));
    return pool;
}

Pauli teleport_correction(BellOutcome outcome) {
    switch (outcome) {
        case BellOutcome::PsiMinus: return Pauli::I;
        case BellOutcome::PsiPlus: return Pauli::Z;
        case BellOutcome::PhiMinus: return Pauli::X;
        case BellOutcome::PhiPlus: return Pauli::Y;
    }
    return Pauli::I;
}

std::pair<QubitState, TeleportRecord> teleport(const QubitState& q, SingletPool& pool,
                                               RandomSource& rng) {
    if (pool.remaining() == 0) {
        throw PoolEmpty("pool " + pool.endpoint_a + "-" + pool.endpoint_b + " is exhausted");
    }
    const std::size_t pair_index = pool.consumed++;
    const TwoQubitState& resource = pool.pairs[pair_index];

    // slot 0: the qubit, slots 1,2: the shared pair (1 at the sender)
    JointState joint;
    joint.n_qubits = 3;
    joint.ancilla_dim = 1;
    joint.amps.resize(8);
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t q_bit = i >> 2;
        joint.amps[i] = (q_bit ? q.down : q.up) * resource.amps[i & 3];
    }

    auto [outcome, residual] = measure_bell_slots(joint, 0, 1, rng);
    TeleportRecord record{outcome, teleport_correction(outcome), pair_index};
    const JointState corrected = apply_pauli(residual, 0, record.correction);
    return {QubitState{corrected.amps[0], corrected.amps[1]}, record};
}

std::pair<QubitState, std::vector<TeleportRecord>> chain_teleport(
    const QubitState& q, std::span<SingletPool* const> pools, RandomSource& rng) {
    QubitState state = q;
    std::vector<TeleportRecord> records;
    records.reserve(pools.size());
    for (SingletPool* pool : pools) {
        auto [next, record] = teleport(state, *pool, rng);
        state = next;
        records.push_back(record);
    }
    return {state, std::move(records)};
}

SessionResult intercenter_session(QuantumFile& file_a, QuantumFile& file_b, SingletPool& pool,
                                  const CenterBehavior& behavior, RandomSource& rng) {
    const std::size_t needed = file_a.unconsumed_count();
    if (needed != file_b.unconsumed_count()) {
        throw FileLengthMismatch("files hold different numbers of unconsumed cells");
    }
    if (pool.remaining() < needed) {
        throw PoolEmpty("pool holds fewer pairs than the file has cells");
    }
    for (auto& cell : file_a.cells) {
        if (!cell.has_value()) continue;
        cell = teleport(*cell, pool, rng).first;
    }
    return pair_session(file_a, file_b, behavior, rng);
}

}  // namespace qkdnet
