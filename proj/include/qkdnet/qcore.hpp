// qcore.hpp
// Exact complex statevector engine for one qubit, two qubits, and a small
// register of qubits tensored with an ancilla. Provides Bell-basis,
// total-spin, single-qubit and general projective measurements.
//
// Conventions, fixed globally:
//   - basis index 0 = |up>, 1 = |down>; Alice's qubit always occupies the
//     first slot of a pair.
//   - |right> = (|up> + |down>)/sqrt2, |left> = (|up> - |down>)/sqrt2.
//   - amplitude layout of a JointState is row-major over qubit slots (slot 0
//     most significant) then ancilla index.
//   - sampling walks cumulative probabilities in a fixed outcome order
//     (PsiMinus, PsiPlus, PhiPlus, PhiMinus; bit 0 before bit 1) using a
//     single uniform draw, so seeded runs replay bit-for-bit.
//   - global phase is carried, never compared; use phase_aligned_distance for
//     physical equality.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qkdnet/common.hpp"
#include "qkdnet/rng.hpp"

namespace qkdnet {

struct QubitState {
    Amplitude up{};
    Amplitude down{};
};

// amps ordered (uu, ud, du, dd)
struct TwoQubitState {
    std::array<Amplitude, 4> amps{};
};

struct AncillaState {
    std::vector<Amplitude> amps;  // dim in [2, 8]

    std::size_t dim() const { return amps.size(); }
};

// n_qubits in [0, 4]; ancilla_dim == 1 means no ancilla.
// amps.size() == (1 << n_qubits) * ancilla_dim.
struct JointState {
    int n_qubits = 0;
    std::size_t ancilla_dim = 1;
    std::vector<Amplitude> amps;

    std::size_t qubit_dim() const { return std::size_t{1} << n_qubits; }
    // index of (qubit configuration q, ancilla index a)
    std::size_t index(std::size_t q, std::size_t a) const { return q * ancilla_dim + a; }
    // bit of slot s in configuration q (slot 0 most significant)
    int slot_bit(std::size_t q, int slot) const {
        return static_cast<int>((q >> (n_qubits - 1 - slot)) & 1u);
    }
};

enum class BellOutcome { PsiMinus, PsiPlus, PhiPlus, PhiMinus };
enum class Basis { Z, X };
enum class Pauli { I, X, Y, Z };
enum class TotalSpin { S0, S1 };  // S0 = singlet, S1 = triplet subspace

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {
    BellOutcome::PsiMinus, BellOutcome::PsiPlus, BellOutcome::PhiPlus, BellOutcome::PhiMinus};

const char* name(BellOutcome o);
const char* name(Basis b);

// Bell eigenstates in the fixed outcome order.
const TwoQubitState& bell_state(BellOutcome o);

// Single-qubit basis states. basis_state(Z,0)=|up>, (Z,1)=|down>,
// (X,0)=|left>, (X,1)=|right> -- the bit convention maps up,left -> 0 and
// down,right -> 1.
QubitState basis_state(Basis basis, int bit);

double norm2(const QubitState& s);
double norm2(const TwoQubitState& s);
double norm2(const JointState& s);
double norm2(std::span<const Amplitude> amps);

bool is_normalized(const QubitState& s, double tol = kNormTolerance);
bool is_normalized(const TwoQubitState& s, double tol = kNormTolerance);
bool is_normalized(const JointState& s, double tol = kNormTolerance);

// Distance between two rays: min over global phase of the 2-norm difference.
double phase_aligned_distance(std::span<const Amplitude> a, std::span<const Amplitude> b);
double phase_aligned_distance(const QubitState& a, const QubitState& b);
double phase_aligned_distance(const TwoQubitState& a, const TwoQubitState& b);

TwoQubitState tensor(const QubitState& a, const QubitState& b);

// JointState of the given qubits (in slot order), no ancilla.
JointState joint_from_qubits(std::span<const QubitState> qubits);
JointState joint_from_two(const TwoQubitState& s);
JointState with_ancilla(const JointState& s, const AncillaState& ancilla);

// <Bell_k|s> for k in the fixed outcome order; an isometry.
std::array<Amplitude, 4> bell_coefficients(const TwoQubitState& s);

std::pair<BellOutcome, TwoQubitState> measure_bell(const TwoQubitState& s, RandomSource& rng);

// S0 collapses onto the singlet; S1 onto the normalized triplet-subspace
// projection.
std::pair<TotalSpin, TwoQubitState> measure_total_spin(const TwoQubitState& s, RandomSource& rng);

std::pair<int, JointState> measure_qubit(const JointState& s, int slot, Basis basis,
                                         RandomSource& rng);

struct Projection {
    double probability = 0.0;
    JointState collapsed;  // full system, target slots replaced by the target state
    JointState residual;   // remaining slots (in original order) tensor ancilla
};

// Projects the given slots onto a target state (dimension 2^slots.size()).
// Throws ZeroProbability when the overlap probability is <= 1e-15.
Projection project(const JointState& s, std::span<const int> slots,
                   std::span<const Amplitude> target);

// Probability only; never throws.
double project_probability(const JointState& s, std::span<const int> slots,
                           std::span<const Amplitude> target);

JointState apply_pauli(const JointState& s, int slot, Pauli op);

// Bell measurement of two slots of a JointState; returns the sampled outcome
// and the residual state on the remaining slots (tensor ancilla).
std::pair<BellOutcome, JointState> measure_bell_slots(const JointState& s, int slot_a, int slot_b,
                                                      RandomSource& rng);

// Controlled entangling rewrite on the reachable subspace: the state must
// carry its ancilla in a product state A_init; for each basis pattern of the
// two center slots, A_init is replaced by branch_map[pattern] where
// pattern = (bit of first slot << 1) | bit of second slot (0 = up).
// Throws InvalidAncilla if a branch state is unnormalized.
JointState apply_controlled_entangler(const JointState& s, int slot_a, int slot_b,
                                      const std::array<AncillaState, 4>& branch_map);

}  // namespace qkdnet
