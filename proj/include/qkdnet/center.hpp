// center.hpp
// The transmission center: per-user quantum files, pairing sessions under
// honest or adversarial behaviors, the classical XOR hidden-file baseline,
// and memory decoherence.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qkdnet/common.hpp"
#include "qkdnet/protocol.hpp"
#include "qkdnet/qcore.hpp"
#include "qkdnet/rng.hpp"

namespace qkdnet {

using UserId = std::string;

// Ordered store of deposited qubits. A cell is consumed (set absent) exactly
// once, by exactly one session.
struct QuantumFile {
    UserId owner;
    std::vector<std::optional<QubitState>> cells;
    std::vector<std::int64_t> deposited_at;  // logical time per cell
    std::int64_t clock = 0;

    std::size_t unconsumed_count() const;
    // Throws CellConsumed when the cell was already used by a session.
    const QubitState& cell(std::size_t i) const;
};

void deposit(QuantumFile& file, std::span<const QubitState> states);

struct Honest {
    SiftVariant variant = SiftVariant::FullBell;
};

// Projects each pair onto `actual` but announces `claimed`.
struct ProjectAs {
    BellOutcome claimed = BellOutcome::PsiMinus;
    BellOutcome actual = BellOutcome::PhiPlus;
};

// Measures both qubits in a fixed basis and fabricates a singlet
// announcement whenever the measured bits differ.
struct InterceptResend {
    Basis basis = Basis::Z;
};

// General ancilla-entangling cheat: projects the center's half of two
// singlet pairs onto alpha|dd> + beta|uu> - gamma|du> - delta|ud> after an
// entangling rewrite of the ancilla. branch_map is indexed by the center-slot
// basis pattern (first bit << 1) | second bit, 0 = up.
struct AncillaAttack {
    Amplitude alpha, beta, gamma, delta;
    std::array<AncillaState, 4> branch_map;
};

using CenterBehavior = std::variant<Honest, ProjectAs, InterceptResend, AncillaAttack>;

struct Announcement {
    std::size_t pair_index = 0;
    std::optional<BellOutcome> outcome;
};

// Everything a cheating center learns, one record per pair it learned
// something about. The value encoding depends on the behavior:
//   InterceptResend: (alice bit << 1) | bob bit
//   AncillaAttack:   sampled ancilla basis index of the retained ancilla
struct CheatRecord {
    std::size_t pair_index = 0;
    int value = 0;
};

struct CheatLog {
    std::vector<CheatRecord> records;
};

struct SessionResult {
    std::vector<Announcement> announcements;
    CheatLog cheat_log;
};

// Consumes all unconsumed cells of both files pairwise, in deposit order.
// Throws FileLengthMismatch when the unconsumed counts differ.
SessionResult pair_session(QuantumFile& file_a, QuantumFile& file_b, const CenterBehavior& behavior,
                           RandomSource& rng);

struct AttackResult {
    bool success = false;
    JointState state;  // Alice,Bob qubits tensor ancilla (valid when success)
};

// Builds the two-singlet-plus-ancilla state, applies the entangling rewrite
// on the center slots and projects them onto the attack state. The projection
// succeeds with probability 1/4; failure is reported, not thrown.
AttackResult construct_attack_state(Amplitude alpha, Amplitude beta, Amplitude gamma,
                                    Amplitude delta, const std::array<AncillaState, 4>& branch_map,
                                    RandomSource& rng);

BitString xor_hidden_file(const BitString& a, const BitString& b);

// Each unconsumed cell is independently scrambled with probability p to a
// uniformly random basis state of a uniformly random basis.
void decohere(QuantumFile& file, double p, RandomSource& rng);

}  // namespace qkdnet
