// Shared helpers for the test suites. Oracles here are deliberately
// independent of the library code paths they check.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qkdnet/center.hpp"
#include "qkdnet/protocol.hpp"
#include "qkdnet/qcore.hpp"
#include "qkdnet/rng.hpp"

namespace qkdnet::testing {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Bb84Choice {
    int bit;
    Basis basis;
};

inline std::vector<Bb84Choice> all_bb84() {
    return {{0, Basis::Z}, {1, Basis::Z}, {0, Basis::X}, {1, Basis::X}};
}

// |count/n - p| within 3 binomial standard deviations
inline bool within_3sigma(std::size_t count, std::size_t n, double p) {
    const double freq = static_cast<double>(count) / static_cast<double>(n);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return std::abs(freq - p) <= 3.0 * sigma;
}

// Independent Bell basis, written out by hand in the (uu, ud, du, dd) order.
inline std::array<std::array<Amplitude, 4>, 4> oracle_bell_basis() {
    return {{
        {0.0, kInvSqrt2, -kInvSqrt2, 0.0},  // psi-
        {0.0, kInvSqrt2, kInvSqrt2, 0.0},   // psi+
        {kInvSqrt2, 0.0, 0.0, kInvSqrt2},   // phi+
        {kInvSqrt2, 0.0, 0.0, -kInvSqrt2},  // phi-
    }};
}

// |<bell_k|s>|^2 computed directly from the hand-written basis
inline std::array<double, 4> oracle_bell_probs(const TwoQubitState& s) {
    const auto basis = oracle_bell_basis();
    std::array<double, 4> p{};
    for (std::size_t k = 0; k < 4; ++k) {
        Amplitude overlap = 0.0;
        for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(basis[k][i]) * s.amps[i];
        p[k] = std::norm(overlap);
    }
    return p;
}

// Direct evaluation of the post-projection attack state on the AB qubits
// tensor the ancilla, normalized: the ancilla-attack residual must match this
// up to global phase. AB index is (alice bit << 1) | bob bit, 0 = up.
inline std::vector<Amplitude> oracle_attack_state(Amplitude alpha, Amplitude beta, Amplitude gamma,
                                                  Amplitude delta,
                                                  const std::array<AncillaState, 4>& branch_map) {
    const std::size_t dim = branch_map[0].dim();
    // branch_map is indexed by the center-slot pattern; the coefficient
    // pairings are alpha with the dd branch, beta with uu, gamma with du,
    // delta with ud.
    const std::array<Amplitude, 4> coeff{std::conj(alpha), std::conj(gamma), std::conj(delta),
                                         std::conj(beta)};
    const std::array<std::size_t, 4> branch_of_ab{3, 2, 1, 0};
    std::vector<Amplitude> amps(4 * dim);
    double n2 = 0.0;
    for (std::size_t ab = 0; ab < 4; ++ab) {
        const auto& branch = branch_map[branch_of_ab[ab]];
        for (std::size_t a = 0; a < dim; ++a) {
            amps[ab * dim + a] = coeff[ab] * branch.amps[a];
            n2 += std::norm(amps[ab * dim + a]);
        }
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : amps) v *= inv;
    return amps;
}

inline AncillaState random_ancilla(std::size_t dim, RandomSource& rng) {
    AncillaState s;
    s.amps.resize(dim);
    double n2 = 0.0;
    for (auto& v : s.amps) {
        v = Amplitude{rng.next_unit() - 0.5, rng.next_unit() - 0.5};
        n2 += std::norm(v);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : s.amps) v *= inv;
    return s;
}

inline std::array<Amplitude, 4> random_coefficients(RandomSource& rng) {
    std::array<Amplitude, 4> c;
    double n2 = 0.0;
    for (auto& v : c) {
        v = Amplitude{rng.next_unit() - 0.5, rng.next_unit() - 0.5};
        n2 += std::norm(v);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : c) v *= inv;
    return c;
}

inline QubitState random_qubit(RandomSource& rng) {
    QubitState q{Amplitude{rng.next_unit() - 0.5, rng.next_unit() - 0.5},
                 Amplitude{rng.next_unit() - 0.5, rng.next_unit() - 0.5}};
    const double inv = 1.0 / std::sqrt(norm2(q));
    q.up *= inv;
    q.down *= inv;
    return q;
}

}  // namespace qkdnet::testing
