#include "qkdnet/qcore.hpp"

#include <algorithm>
#include <cmath>

namespace qkdnet {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void renormalize(std::vector<Amplitude>& amps) {
    double n2 = norm2(std::span<const Amplitude>(amps));
    if (n2 <= 0.0) return;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
}

TwoQubitState make_bell(Amplitude uu, Amplitude ud, Amplitude du, Amplitude dd) {
    return TwoQubitState{{uu, ud, du, dd}};
}

const std::array<TwoQubitState, 4> kBellStates = {
    make_bell(0, kInvSqrt2, -kInvSqrt2, 0),   // PsiMinus
    make_bell(0, kInvSqrt2, kInvSqrt2, 0),    // PsiPlus
    make_bell(kInvSqrt2, 0, 0, kInvSqrt2),    // PhiPlus
    make_bell(kInvSqrt2, 0, 0, -kInvSqrt2),   // PhiMinus
};

}  // namespace

const char* name(BellOutcome o) {
    switch (o) {
        case BellOutcome::PsiMinus: return "psi_minus";
        case BellOutcome::PsiPlus: return "psi_plus";
        case BellOutcome::PhiPlus: return "phi_plus";
        case BellOutcome::PhiMinus: return "phi_minus";
    }
    return "?";
}

const char* name(Basis b) { return b == Basis::Z ? "z" : "x"; }

const TwoQubitState& bell_state(BellOutcome o) {
    return kBellStates[static_cast<std::size_t>(o)];
}

QubitState basis_state(Basis basis, int bit) {
    if (basis == Basis::Z) {
        return bit == 0 ? QubitState{1.0, 0.0} : QubitState{0.0, 1.0};
    }
    // left encodes 0, right encodes 1
    return bit == 0 ? QubitState{kInvSqrt2, -kInvSqrt2} : QubitState{kInvSqrt2, kInvSqrt2};
}

double norm2(std::span<const Amplitude> amps) {
    double n = 0.0;
    for (const auto& a : amps) n += std::norm(a);
    return n;
}

double norm2(const QubitState& s) { return std::norm(s.up) + std::norm(s.down); }
double norm2(const TwoQubitState& s) { return norm2(std::span<const Amplitude>(s.amps)); }
double norm2(const JointState& s) { return norm2(std::span<const Amplitude>(s.amps)); }

bool is_normalized(const QubitState& s, double tol) { return std::abs(norm2(s) - 1.0) <= tol; }
bool is_normalized(const TwoQubitState& s, double tol) { return std::abs(norm2(s) - 1.0) <= tol; }
bool is_normalized(const JointState& s, double tol) { return std::abs(norm2(s) - 1.0) <= tol; }

double phase_aligned_distance(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    if (a.size() != b.size()) throw LengthMismatch("state dimensions differ");
    Amplitude overlap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
    // rotate b onto a, then measure the residual directly; this avoids the
    // catastrophic cancellation of the ||a||^2 + ||b||^2 - 2|<a,b>| form
    const double mag = std::abs(overlap);
    const Amplitude phase = mag > 0.0 ? overlap / mag : Amplitude{1.0, 0.0};
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += std::norm(a[i] * phase - b[i]);
    return std::sqrt(d2);
}

double phase_aligned_distance(const QubitState& a, const QubitState& b) {
    const std::array<Amplitude, 2> va{a.up, a.down}, vb{b.up, b.down};
    return phase_aligned_distance(std::span<const Amplitude>(va), std::span<const Amplitude>(vb));
}

double phase_aligned_distance(const TwoQubitState& a, const TwoQubitState& b) {
    return phase_aligned_distance(std::span<const Amplitude>(a.amps),
                                  std::span<const Amplitude>(b.amps));
}

TwoQubitState tensor(const QubitState& a, const QubitState& b) {
    return TwoQubitState{{a.up * b.up, a.up * b.down, a.down * b.up, a.down * b.down}};
}

JointState joint_from_qubits(std::span<const QubitState> qubits) {
    JointState s;
    s.n_qubits = static_cast<int>(qubits.size());
    s.ancilla_dim = 1;
    s.amps.assign(s.qubit_dim(), Amplitude{1.0, 0.0});
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        for (int slot = 0; slot < s.n_qubits; ++slot) {
            const auto& qs = qubits[static_cast<std::size_t>(slot)];
            s.amps[q] *= s.slot_bit(q, slot) ? qs.down : qs.up;
        }
    }
    return s;
}

JointState joint_from_two(const TwoQubitState& two) {
    JointState s;
    s.n_qubits = 2;
    s.ancilla_dim = 1;
    s.amps.assign(two.amps.begin(), two.amps.end());
    return s;
}

JointState with_ancilla(const JointState& s, const AncillaState& ancilla) {
    JointState out;
    out.n_qubits = s.n_qubits;
    out.ancilla_dim = s.ancilla_dim * ancilla.dim();
    out.amps.resize(s.amps.size() * ancilla.dim());
    std::size_t k = 0;
    for (const auto& base : s.amps) {
        for (const auto& anc : ancilla.amps) out.amps[k++] = base * anc;
    }
    return out;
}

std::array<Amplitude, 4> bell_coefficients(const TwoQubitState& s) {
    std::array<Amplitude, 4> c{};
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < 4; ++i) {
            c[k] += std::conj(kBellStates[k].amps[i]) * s.amps[i];
        }
    }
    return c;
}

std::pair<BellOutcome, TwoQubitState> measure_bell(const TwoQubitState& s, RandomSource& rng) {
    const auto c = bell_coefficients(s);
    const double u = rng.next_unit();
    double cum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        cum += std::norm(c[k]);
        if (u < cum || k == 3) {
            return {kBellOutcomes[k], kBellStates[k]};
        }
    }
    return {BellOutcome::PhiMinus, kBellStates[3]};  // unreachable
}

std::pair<TotalSpin, TwoQubitState> measure_total_spin(const TwoQubitState& s, RandomSource& rng) {
    Amplitude singlet_amp = 0.0;
    const auto& psi_minus = kBellStates[0];
    for (std::size_t i = 0; i < 4; ++i) singlet_amp += std::conj(psi_minus.amps[i]) * s.amps[i];
    const double p0 = std::norm(singlet_amp);
    if (rng.next_unit() < p0) {
        return {TotalSpin::S0, psi_minus};
    }
    // triplet projection: subtract the singlet component, renormalize
    TwoQubitState t = s;
    for (std::size_t i = 0; i < 4; ++i) t.amps[i] -= singlet_amp * psi_minus.amps[i];
    const double n2 = norm2(t);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : t.amps) a *= inv;
    return {TotalSpin::S1, t};
}

std::pair<int, JointState> measure_qubit(const JointState& s, int slot, Basis basis,
                                         RandomSource& rng) {
    const QubitState b0 = basis_state(basis, 0);
    const QubitState b1 = basis_state(basis, 1);

    // probability of outcome 0
    double p0 = 0.0;
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        if (s.slot_bit(q, slot) != 0) continue;
        const std::size_t q1 = q | (std::size_t{1} << (s.n_qubits - 1 - slot));
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            const Amplitude c0 = std::conj(b0.up) * s.amps[s.index(q, a)] +
                                 std::conj(b0.down) * s.amps[s.index(q1, a)];
            p0 += std::norm(c0);
        }
    }

    const int bit = rng.next_unit() < p0 ? 0 : 1;
    const QubitState& out = bit == 0 ? b0 : b1;

    JointState collapsed = s;
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        if (s.slot_bit(q, slot) != 0) continue;
        const std::size_t q1 = q | (std::size_t{1} << (s.n_qubits - 1 - slot));
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            const Amplitude c = std::conj(out.up) * s.amps[s.index(q, a)] +
                                std::conj(out.down) * s.amps[s.index(q1, a)];
            collapsed.amps[s.index(q, a)] = c * out.up;
            collapsed.amps[s.index(q1, a)] = c * out.down;
        }
    }
    renormalize(collapsed.amps);
    return {bit, std::move(collapsed)};
}

namespace {

// Residual amplitudes after projecting `slots` onto `target`; not normalized.
// The residual is indexed over the remaining slots (original order) and the
// ancilla.
std::vector<Amplitude> residual_amplitudes(const JointState& s, std::span<const int> slots,
                                           std::span<const Amplitude> target,
                                           std::vector<int>& remaining) {
    const std::size_t k = slots.size();
    remaining.clear();
    for (int slot = 0; slot < s.n_qubits; ++slot) {
        if (std::find(slots.begin(), slots.end(), slot) == slots.end()) remaining.push_back(slot);
    }
    const std::size_t rest_dim = std::size_t{1} << remaining.size();
    std::vector<Amplitude> resid(rest_dim * s.ancilla_dim, Amplitude{0.0, 0.0});

    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        std::size_t t = 0;
        for (std::size_t i = 0; i < k; ++i) t = (t << 1) | s.slot_bit(q, slots[i]);
        std::size_t r = 0;
        for (int slot : remaining) r = (r << 1) | s.slot_bit(q, slot);
        const Amplitude w = std::conj(target[t]);
        if (w == Amplitude{}) continue;
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            resid[r * s.ancilla_dim + a] += w * s.amps[s.index(q, a)];
        }
    }
    return resid;
}

}  // namespace

double project_probability(const JointState& s, std::span<const int> slots,
                           std::span<const Amplitude> target) {
    std::vector<int> remaining;
    const auto resid = residual_amplitudes(s, slots, target, remaining);
    return norm2(std::span<const Amplitude>(resid));
}

Projection project(const JointState& s, std::span<const int> slots,
                   std::span<const Amplitude> target) {
    std::vector<int> remaining;
    auto resid = residual_amplitudes(s, slots, target, remaining);
    const double p = norm2(std::span<const Amplitude>(resid));
    if (p <= kZeroProbability) throw ZeroProbability();

    Projection out;
    out.probability = p;

    out.residual.n_qubits = static_cast<int>(remaining.size());
    out.residual.ancilla_dim = s.ancilla_dim;
    out.residual.amps = std::move(resid);
    renormalize(out.residual.amps);

    // full state = target on the projected slots, residual on the rest
    out.collapsed.n_qubits = s.n_qubits;
    out.collapsed.ancilla_dim = s.ancilla_dim;
    out.collapsed.amps.assign(s.amps.size(), Amplitude{0.0, 0.0});
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        std::size_t t = 0;
        for (std::size_t i = 0; i < slots.size(); ++i) t = (t << 1) | s.slot_bit(q, slots[i]);
        std::size_t r = 0;
        for (int slot : remaining) r = (r << 1) | s.slot_bit(q, slot);
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            out.collapsed.amps[s.index(q, a)] =
                target[t] * out.residual.amps[r * s.ancilla_dim + a];
        }
    }
    renormalize(out.collapsed.amps);
    return out;
}

JointState apply_pauli(const JointState& s, int slot, Pauli op) {
    if (op == Pauli::I) return s;
    JointState out = s;
    const std::size_t mask = std::size_t{1} << (s.n_qubits - 1 - slot);
    const Amplitude i_unit{0.0, 1.0};
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        const bool down = (q & mask) != 0;
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            const Amplitude v = s.amps[s.index(q, a)];
            switch (op) {
                case Pauli::X:
                    out.amps[s.index(q ^ mask, a)] = v;
                    break;
                case Pauli::Y:
                    // Y|up> = i|down>, Y|down> = -i|up>
                    out.amps[s.index(q ^ mask, a)] = down ? -i_unit * v : i_unit * v;
                    break;
                case Pauli::Z:
                    out.amps[s.index(q, a)] = down ? -v : v;
                    break;
                case Pauli::I:
                    break;
            }
        }
    }
    return out;
}

std::pair<BellOutcome, JointState> measure_bell_slots(const JointState& s, int slot_a, int slot_b,
                                                      RandomSource& rng) {
    const std::array<int, 2> slots{slot_a, slot_b};
    std::array<double, 4> probs{};
    for (std::size_t k = 0; k < 4; ++k) {
        probs[k] = project_probability(s, slots, kBellStates[k].amps);
    }
    const double u = rng.next_unit();
    double cum = 0.0;
    std::size_t pick = 3;
    for (std::size_t k = 0; k < 4; ++k) {
        cum += probs[k];
        if (u < cum) {
            pick = k;
            break;
        }
    }
    auto proj = project(s, slots, kBellStates[pick].amps);
    return {kBellOutcomes[pick], std::move(proj.residual)};
}

JointState apply_controlled_entangler(const JointState& s, int slot_a, int slot_b,
                                      const std::array<AncillaState, 4>& branch_map) {
    for (const auto& branch : branch_map) {
        if (std::abs(norm2(std::span<const Amplitude>(branch.amps)) - 1.0) > kNormTolerance) {
            throw InvalidAncilla("branch ancilla state is not normalized");
        }
        if (branch.dim() != s.ancilla_dim) {
            throw InvalidAncilla("branch ancilla dimension mismatch");
        }
    }

    // Extract A_init from the product structure: the ancilla row of the
    // heaviest qubit configuration, normalized.
    std::size_t heaviest = 0;
    double best = -1.0;
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        double w = 0.0;
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) w += std::norm(s.amps[s.index(q, a)]);
        if (w > best) {
            best = w;
            heaviest = q;
        }
    }
    std::vector<Amplitude> a_init(s.ancilla_dim);
    for (std::size_t a = 0; a < s.ancilla_dim; ++a) a_init[a] = s.amps[s.index(heaviest, a)];
    renormalize(a_init);

    JointState out = s;
    for (std::size_t q = 0; q < s.qubit_dim(); ++q) {
        // coefficient of this configuration in the qubit part
        Amplitude coeff = 0.0;
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            coeff += std::conj(a_init[a]) * s.amps[s.index(q, a)];
        }
        const std::size_t pattern =
            static_cast<std::size_t>((s.slot_bit(q, slot_a) << 1) | s.slot_bit(q, slot_b));
        const auto& branch = branch_map[pattern];
        for (std::size_t a = 0; a < s.ancilla_dim; ++a) {
            out.amps[s.index(q, a)] = coeff * branch.amps[a];
        }
    }
    return out;
}

}  // namespace qkdnet
