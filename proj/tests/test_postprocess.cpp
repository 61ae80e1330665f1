#include <doctest.h>

#include <cmath>

#include "qkdnet/postprocess.hpp"
#include "support.hpp"

using namespace qkdnet;
using namespace qkdnet::testing;

namespace {

BitString random_bits(std::size_t n, RandomSource& rng) {
    BitString out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_bit());
    return out;
}

BitString with_errors(const BitString& a, double rate, RandomSource& rng) {
    BitString b = a;
    for (auto& bit : b) {
        if (rng.next_unit() < rate) bit ^= 1;
    }
    return b;
}

std::size_t mismatch_count(const BitString& a, const BitString& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return n;
}

}  // namespace

TEST_CASE("estimate_error") {
    RandomSource rng(1);
    SUBCASE("identical strings give qber 0") {
        const auto a = random_bits(1000, rng);
        const auto est = estimate_error(a, a, 0.3, rng);
        CHECK(est.qber == 0.0);
        CHECK(est.remaining_a == est.remaining_b);
        CHECK(est.remaining_a.size() == 1000 - est.sampled);
    }
    SUBCASE("complementary strings give qber 1") {
        const auto a = random_bits(1000, rng);
        BitString b = a;
        for (auto& bit : b) bit ^= 1;
        CHECK(estimate_error(a, b, 0.5, rng).qber == 1.0);
    }
    SUBCASE("5 percent injected errors are estimated within the binomial bound") {
        const auto a = random_bits(10000, rng);
        const auto b = with_errors(a, 0.05, rng);
        const auto est = estimate_error(a, b, 0.2, rng);
        CHECK(std::abs(est.qber - 0.05) < 0.02);
    }
    SUBCASE("removal is identical on both sides") {
        const auto a = random_bits(500, rng);
        const auto b = with_errors(a, 0.1, rng);
        const auto est = estimate_error(a, b, 0.25, rng);
        CHECK(est.remaining_a.size() == est.remaining_b.size());
        CHECK(mismatch_count(est.remaining_a, est.remaining_b) + est.mismatches ==
              mismatch_count(a, b));
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(estimate_error(BitString{1}, BitString{1}, 0.5, rng), EmptyKey);
        const auto a = random_bits(10, rng);
        CHECK_THROWS_AS(estimate_error(a, random_bits(9, rng), 0.5, rng), LengthMismatch);
        CHECK_THROWS_AS(estimate_error(a, a, 0.0, rng), RangeError);
        CHECK_THROWS_AS(estimate_error(a, a, 1.0, rng), RangeError);
    }
}

TEST_CASE("correct_errors") {
    RandomSource rng(2);
    SUBCASE("clean strings disclose block parities only, no flips") {
        const auto a = random_bits(1024, rng);
        const auto res = correct_errors(a, a, 16, 3, rng);
        CHECK(res.b == a);
        CHECK(res.leakage.disclosed_bits == (1024 / 16) * 3);
    }
    SUBCASE("a single error costs at most log2(block)+1 parities beyond the clean run") {
        const auto a = random_bits(1024, rng);
        BitString b = a;
        b[137] ^= 1;
        const auto res = correct_errors(a, b, 16, 1, rng);
        CHECK(res.b == a);
        CHECK(res.leakage.disclosed_bits <= 1024 / 16 + 4);
    }
    SUBCASE("reference string is never modified") {
        const auto a = random_bits(256, rng);
        const auto b = with_errors(a, 0.05, rng);
        const auto res = correct_errors(a, b, 8, 4, rng);
        CHECK(res.a == a);
    }
    SUBCASE("ledger is bounded below by blocks per pass times passes") {
        const auto a = random_bits(300, rng);
        const auto b = with_errors(a, 0.02, rng);
        const auto res = correct_errors(a, b, 16, 4, rng);
        const std::size_t blocks = (300 + 15) / 16;
        CHECK(res.leakage.disclosed_bits >= blocks * 4);
    }
    SUBCASE("1 percent errors over 10k bits: residual rate below 1e-3 across trials") {
        std::size_t residual = 0;
        const std::size_t trials = 100, n = 10000;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto a = random_bits(n, rng);
            const auto b = with_errors(a, 0.01, rng);
            residual += mismatch_count(correct_errors(a, b, 16, 4, rng).b, a);
        }
        CHECK(static_cast<double>(residual) / static_cast<double>(trials * n) < 1e-3);
    }
    SUBCASE("input validation") {
        const auto a = random_bits(10, rng);
        CHECK_THROWS_AS(correct_errors(a, random_bits(9, rng), 8, 1, rng), LengthMismatch);
        CHECK_THROWS_AS(correct_errors(a, a, 1, 1, rng), RangeError);
        CHECK_THROWS_AS(correct_errors(a, a, 8, 0, rng), RangeError);
    }
}

TEST_CASE("privacy_amplify") {
    RandomSource rng(3);
    const auto key = random_bits(64, rng);

    SUBCASE("zero matrix maps to all zeros") {
        HashSeed seed{BitString(16 * 64, 0), 16};
        CHECK(privacy_amplify(key, seed) == BitString(16, 0));
    }
    SUBCASE("identity-prefix matrix selects the leading key bits") {
        HashSeed seed{BitString(16 * 64, 0), 16};
        for (std::size_t i = 0; i < 16; ++i) seed.bits[i * 64 + i] = 1;
        const auto out = privacy_amplify(key, seed);
        for (std::size_t i = 0; i < 16; ++i) CHECK(out[i] == key[i]);
    }
    SUBCASE("single input-bit flips propagate to each output bit half the time") {
        const std::size_t trials = 1000;
        std::size_t flips = 0, cells = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto seed = random_hash_seed(64, 8, rng);
            BitString flipped = key;
            flipped[rng.next_below(64)] ^= 1;
            const auto out1 = privacy_amplify(key, seed);
            const auto out2 = privacy_amplify(flipped, seed);
            for (std::size_t i = 0; i < 8; ++i) {
                ++cells;
                flips += out1[i] != out2[i];
            }
        }
        CHECK(within_3sigma(flips, cells, 0.5));
    }
    SUBCASE("linearity over GF(2)") {
        const auto seed = random_hash_seed(64, 24, rng);
        const auto k2 = random_bits(64, rng);
        BitString sum(64);
        for (std::size_t i = 0; i < 64; ++i) sum[i] = key[i] ^ k2[i];
        const auto lhs = privacy_amplify(sum, seed);
        const auto h1 = privacy_amplify(key, seed);
        const auto h2 = privacy_amplify(k2, seed);
        BitString rhs(24);
        for (std::size_t i = 0; i < 24; ++i) rhs[i] = h1[i] ^ h2[i];
        CHECK(lhs == rhs);
    }
    SUBCASE("output longer than the key is rejected") {
        CHECK_THROWS_AS(privacy_amplify(key, random_hash_seed(64, 65, rng)), OutputTooLong);
    }
}

TEST_CASE("final_length") {
    CHECK(final_length(500, 0.0, LeakageLedger{0}, 0) == 500);
    CHECK(final_length(500, 0.5, LeakageLedger{0}, 0) == 0);
    // h2(0.02) ~ 0.1414, so ceil(1000 * h2) = 142
    CHECK(final_length(1000, 0.02, LeakageLedger{120}, 64) == 674);
}

TEST_CASE("verify_agreement") {
    CHECK(verify_agreement(bits_from_string("101"), bits_from_string("101")));
    CHECK(!verify_agreement(bits_from_string("101"), bits_from_string("100")));
    CHECK(verify_agreement({}, {}));
    CHECK(!verify_agreement(bits_from_string("1"), {}));
}
