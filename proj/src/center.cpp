#include "qkdnet/center.hpp"

#include <cmath>

namespace qkdnet {

std::size_t QuantumFile::unconsumed_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) {
        if (c.has_value()) ++n;
    }
    return n;
}

const QubitState& QuantumFile::cell(std::size_t i) const {
    if (!cells[i].has_value()) {
        throw CellConsumed("cell " + std::to_string(i) + " of file " + owner +
                           " was already consumed");
    }
    return *cells[i];
}

void deposit(QuantumFile& file, std::span<const QubitState> states) {
    for (const auto& s : states) {
        file.cells.push_back(s);
        file.deposited_at.push_back(file.clock++);
    }
}

namespace {

int measure_single(const QubitState& q, Basis basis, RandomSource& rng) {
    const QubitState b0 = basis_state(basis, 0);
    const double p0 = std::norm(std::conj(b0.up) * q.up + std::conj(b0.down) * q.down);
    return rng.next_unit() < p0 ? 0 : 1;
}

}  // namespace

SessionResult pair_session(QuantumFile& file_a, QuantumFile& file_b, const CenterBehavior& behavior,
                           RandomSource& rng) {
    if (file_a.unconsumed_count() != file_b.unconsumed_count()) {
        throw FileLengthMismatch("files hold different numbers of unconsumed cells");
    }

    SessionResult result;
    std::size_t ia = 0, ib = 0;
    std::size_t pair_index = 0;
    while (true) {
        while (ia < file_a.cells.size() && !file_a.cells[ia].has_value()) ++ia;
        while (ib < file_b.cells.size() && !file_b.cells[ib].has_value()) ++ib;
        if (ia >= file_a.cells.size() || ib >= file_b.cells.size()) break;

        const QubitState qa = *file_a.cells[ia];
        const QubitState qb = *file_b.cells[ib];
        file_a.cells[ia].reset();
        file_b.cells[ib].reset();

        Announcement ann;
        ann.pair_index = pair_index;

        if (const auto* honest = std::get_if<Honest>(&behavior)) {
            const TwoQubitState pair = tensor(qa, qb);
            if (honest->variant == SiftVariant::FullBell) {
                ann.outcome = measure_bell(pair, rng).first;
            } else {
                if (measure_total_spin(pair, rng).first == TotalSpin::S0) {
                    ann.outcome = BellOutcome::PsiMinus;
                }
            }
        } else if (const auto* pa = std::get_if<ProjectAs>(&behavior)) {
            const JointState joint = joint_from_two(tensor(qa, qb));
            const std::array<int, 2> slots{0, 1};
            const double p = project_probability(joint, slots, bell_state(pa->actual).amps);
            if (p > kZeroProbability && rng.next_unit() < p) {
                ann.outcome = pa->claimed;
            }
        } else if (const auto* ir = std::get_if<InterceptResend>(&behavior)) {
            const int bit_a = measure_single(qa, ir->basis, rng);
            const int bit_b = measure_single(qb, ir->basis, rng);
            result.cheat_log.records.push_back({pair_index, (bit_a << 1) | bit_b});
            if (bit_a != bit_b) ann.outcome = BellOutcome::PsiMinus;
        } else if (const auto* attack = std::get_if<AncillaAttack>(&behavior)) {
            auto res = construct_attack_state(attack->alpha, attack->beta, attack->gamma,
                                              attack->delta, attack->branch_map, rng);
            if (res.success) {
                ann.outcome = BellOutcome::PsiMinus;
                // the center keeps its ancilla; sample its basis outcome
                std::vector<double> probs(res.state.ancilla_dim, 0.0);
                for (std::size_t q = 0; q < res.state.qubit_dim(); ++q) {
                    for (std::size_t a = 0; a < res.state.ancilla_dim; ++a) {
                        probs[a] += std::norm(res.state.amps[res.state.index(q, a)]);
                    }
                }
                const double u = rng.next_unit();
                double cum = 0.0;
                int outcome = static_cast<int>(res.state.ancilla_dim) - 1;
                for (std::size_t a = 0; a < probs.size(); ++a) {
                    cum += probs[a];
                    if (u < cum) {
                        outcome = static_cast<int>(a);
                        break;
                    }
                }
                result.cheat_log.records.push_back({pair_index, outcome});
            }
        }

        result.announcements.push_back(std::move(ann));
        ++pair_index;
    }
    return result;
}

AttackResult construct_attack_state(Amplitude alpha, Amplitude beta, Amplitude gamma,
                                    Amplitude delta, const std::array<AncillaState, 4>& branch_map,
                                    RandomSource& rng) {
    const double coeff_norm =
        std::norm(alpha) + std::norm(beta) + std::norm(gamma) + std::norm(delta);
    if (std::abs(coeff_norm - 1.0) > kNormTolerance) {
        throw RangeError("attack coefficients are not normalized");
    }

    // slots: 0 = Alice, 1 = center half of pair 1, 2 = Bob, 3 = center half
    // of pair 2
    const TwoQubitState singlet = bell_state(BellOutcome::PsiMinus);
    JointState joint;
    joint.n_qubits = 4;
    joint.ancilla_dim = 1;
    joint.amps.resize(16);
    for (std::size_t q = 0; q < 16; ++q) {
        const std::size_t pair1 = (q >> 2) & 3;  // slots 0,1
        const std::size_t pair2 = q & 3;         // slots 2,3
        joint.amps[q] = singlet.amps[pair1] * singlet.amps[pair2];
    }

    AncillaState init;
    init.amps.assign(branch_map[0].dim(), Amplitude{0.0, 0.0});
    init.amps[0] = 1.0;
    joint = with_ancilla(joint, init);

    joint = apply_controlled_entangler(joint, 1, 3, branch_map);

    // attack projector on the center slots, ordered (uu, ud, du, dd)
    const std::array<Amplitude, 4> attack{beta, -delta, -gamma, alpha};
    const std::array<int, 2> center_slots{1, 3};
    const double p = project_probability(joint, center_slots, attack);
    if (p <= kZeroProbability || rng.next_unit() >= p) {
        return {};
    }
    AttackResult out;
    out.success = true;
    out.state = project(joint, center_slots, attack).residual;
    return out;
}

BitString xor_hidden_file(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) throw LengthMismatch("xor operands have different lengths");
    BitString c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] ^ b[i];
    return c;
}

void decohere(QuantumFile& file, double p, RandomSource& rng) {
    if (p < 0.0 || p > 1.0) throw RangeError("decoherence probability out of [0, 1]");
    for (auto& cell : file.cells) {
        if (!cell.has_value()) continue;
        if (rng.next_unit() < p) {
            const Basis basis = rng.next_bit() ? Basis::X : Basis::Z;
            cell = basis_state(basis, rng.next_bit());
        }
    }
}

}  // namespace qkdnet
