#include "qkdnet/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qkdnet {

ErrorEstimate estimate_error(const BitString& a, const BitString& b, double fraction,
                             RandomSource& rng) {
    if (a.size() != b.size()) throw LengthMismatch("estimation inputs have different lengths");
    if (a.size() < 2) throw EmptyKey("estimation needs at least 2 bits");
    if (fraction <= 0.0 || fraction >= 1.0) throw RangeError("fraction must be in (0, 1)");

    const std::size_t n = a.size();
    const std::size_t k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (k == 0) throw DegenerateSample("sample size is zero");

    // partial Fisher-Yates: first k entries are the sampled positions
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_below(n - i);
        std::swap(idx[i], idx[j]);
    }
    std::vector<bool> sampled(n, false);
    for (std::size_t i = 0; i < k; ++i) sampled[idx[i]] = true;

    ErrorEstimate est;
    est.sampled = k;
    for (std::size_t i = 0; i < n; ++i) {
        if (sampled[i]) {
            if (a[i] != b[i]) ++est.mismatches;
        } else {
            est.remaining_a.push_back(a[i]);
            est.remaining_b.push_back(b[i]);
        }
    }
    est.qber = static_cast<double>(est.mismatches) / static_cast<double>(est.sampled);
    return est;
}

namespace {

std::uint8_t parity(const BitString& bits, const std::vector<std::size_t>& order,
                    std::size_t begin, std::size_t end) {
    std::uint8_t p = 0;
    for (std::size_t i = begin; i < end; ++i) p ^= bits[order[i]];
    return p;
}

// Locates one error in order[begin, end) by disclosed-parity bisection and
// flips it in b. Returns the number of parities disclosed.
std::size_t bisect_and_flip(const BitString& a, BitString& b,
                            const std::vector<std::size_t>& order, std::size_t begin,
                            std::size_t end) {
    std::size_t disclosed = 0;
    while (end - begin > 1) {
        const std::size_t mid = begin + (end - begin + 1) / 2;
        ++disclosed;
        if (parity(a, order, begin, mid) != parity(b, order, begin, mid)) {
            end = mid;
        } else {
            begin = mid;
        }
    }
    b[order[begin]] ^= 1;
    return disclosed;
}

}  // namespace

CorrectionResult correct_errors(const BitString& a, const BitString& b, std::size_t block_size,
                                std::size_t passes, RandomSource& rng) {
    if (a.size() != b.size()) throw LengthMismatch("correction inputs have different lengths");
    if (block_size < 2) throw RangeError("block_size must be >= 2");
    if (passes < 1) throw RangeError("passes must be >= 1");

    CorrectionResult out;
    out.a = a;
    out.b = b;
    const std::size_t n = a.size();
    if (n == 0) return out;

    std::vector<std::size_t> order(n);
    for (std::size_t pass = 0; pass < passes; ++pass) {
        // shared shuffle seed: both parties derive the same permutation
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.next_below(i)]);
        }
        for (std::size_t begin = 0; begin < n; begin += block_size) {
            const std::size_t end = std::min(begin + block_size, n);
            ++out.leakage.disclosed_bits;
            if (parity(out.a, order, begin, end) != parity(out.b, order, begin, end)) {
                out.leakage.disclosed_bits += bisect_and_flip(out.a, out.b, order, begin, end);
            }
        }
    }
    return out;
}

BitString privacy_amplify(const BitString& key, const HashSeed& seed) {
    if (seed.out_len > key.size()) throw OutputTooLong("hash output longer than key");
    if (seed.bits.size() != seed.out_len * key.size()) {
        throw LengthMismatch("hash seed size does not match out_len x in_len");
    }
    BitString out(seed.out_len, 0);
    for (std::size_t row = 0; row < seed.out_len; ++row) {
        std::uint8_t acc = 0;
        const std::size_t base = row * key.size();
        for (std::size_t col = 0; col < key.size(); ++col) {
            acc ^= static_cast<std::uint8_t>(seed.bits[base + col] & key[col]);
        }
        out[row] = acc;
    }
    return out;
}

HashSeed random_hash_seed(std::size_t in_len, std::size_t out_len, RandomSource& rng) {
    HashSeed seed;
    seed.out_len = out_len;
    seed.bits.resize(in_len * out_len);
    for (auto& b : seed.bits) b = static_cast<std::uint8_t>(rng.next_bit());
    return seed;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::size_t final_length(std::size_t sifted_len, double qber, const LeakageLedger& leakage,
                         std::size_t margin) {
    const auto entropy_cost = static_cast<std::size_t>(
        std::ceil(static_cast<double>(sifted_len) * binary_entropy(qber)));
    const std::size_t cost = leakage.disclosed_bits + entropy_cost + margin;
    return sifted_len > cost ? sifted_len - cost : 0;
}

bool verify_agreement(const BitString& a, const BitString& b) { return a == b; }

}  // namespace qkdnet
