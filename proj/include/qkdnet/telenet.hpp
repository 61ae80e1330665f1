// telenet.hpp
// Multi-center network: inter-center singlet pools, teleportation of
// deposited qubits between centers, and chained teleportation through
// intermediate stations.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qkdnet/center.hpp"
#include "qkdnet/common.hpp"
#include "qkdnet/qcore.hpp"
#include "qkdnet/rng.hpp"

namespace qkdnet {

using CenterId = std::string;

struct SingletPool {
    CenterId endpoint_a;
    CenterId endpoint_b;
    std::vector<TwoQubitState> pairs;  // each a singlet unless the harness injects noise
    std::size_t consumed = 0;

    std::size_t remaining() const { return pairs.size() - consumed; }
};

SingletPool make_ideal_pool(CenterId a, CenterId b, std::size_t n_pairs);

struct TeleportRecord {
    BellOutcome bell_outcome = BellOutcome::PsiMinus;
    Pauli correction = Pauli::I;
    std::size_t pair_index = 0;
};

// Pauli restoring the input state for each Bell outcome, given the singlet
// resource convention.
Pauli teleport_correction(BellOutcome outcome);

// Consumes one pool pair; the returned qubit equals q up to global phase.
std::pair<QubitState, TeleportRecord> teleport(const QubitState& q, SingletPool& pool,
                                               RandomSource& rng);

// Sequential teleport through each pool of a path.
std::pair<QubitState, std::vector<TeleportRecord>> chain_teleport(
    const QubitState& q, std::span<SingletPool* const> pools, RandomSource& rng);

// Teleports every unconsumed cell of file_a across the pool, then runs a
// pairing session at the receiving center.
SessionResult intercenter_session(QuantumFile& file_a, QuantumFile& file_b, SingletPool& pool,
                                  const CenterBehavior& behavior, RandomSource& rng);

}  // namespace qkdnet
