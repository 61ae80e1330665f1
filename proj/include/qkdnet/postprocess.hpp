// postprocess.hpp
// Classical post-processing: error-rate estimation, interactive parity-block
// error correction, and universal-hash privacy amplification with leakage
// accounting.

#pragma once

#include <cstddef>

#include "qkdnet/common.hpp"
#include "qkdnet/rng.hpp"

namespace qkdnet {

struct ErrorEstimate {
    std::size_t sampled = 0;
    std::size_t mismatches = 0;
    double qber = 0.0;
    BitString remaining_a;
    BitString remaining_b;
};

// Count of parity bits exchanged in the clear.
struct LeakageLedger {
    std::size_t disclosed_bits = 0;
};

// Random binary matrix, row-major, out_len x in_len.
struct HashSeed {
    BitString bits;
    std::size_t out_len = 0;
};

// Samples ceil(fraction * len) positions without replacement, compares them,
// and removes them from both strings.
ErrorEstimate estimate_error(const BitString& a, const BitString& b, double fraction,
                             RandomSource& rng);

struct CorrectionResult {
    BitString a;
    BitString b;
    LeakageLedger leakage;
};

// Iterative parity-block protocol. Each pass shuffles both strings with a
// shared seed, partitions into blocks, compares block parities, and binary-
// searches each odd-parity block to locate and flip one error in b. Every
// disclosed parity increments the ledger. a is the reference and is never
// modified.
CorrectionResult correct_errors(const BitString& a, const BitString& b, std::size_t block_size,
                                std::size_t passes, RandomSource& rng);

// Binary matrix times key over GF(2).
BitString privacy_amplify(const BitString& key, const HashSeed& seed);

HashSeed random_hash_seed(std::size_t in_len, std::size_t out_len, RandomSource& rng);

// max(0, sifted - disclosed - ceil(sifted * h2(qber)) - margin)
std::size_t final_length(std::size_t sifted_len, double qber, const LeakageLedger& leakage,
                         std::size_t margin);

bool verify_agreement(const BitString& a, const BitString& b);

// Binary entropy with h2(0) = h2(1) = 0.
double binary_entropy(double p);

}  // namespace qkdnet
