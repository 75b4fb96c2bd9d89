#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qrbench/congr.hpp"

using namespace qrbench;
using namespace qrbench::congr;
using arith::i64;
using arith::u64;

namespace {

// Product of the nonzero values of Q over 1 <= j < k <= lim, by direct evaluation.
u64 naive_product(i64 a, i64 b, i64 c, u64 p, u64 lim, bool square) {
    u64 prod = 1;
    for (u64 j = 1; j <= lim; ++j)
        for (u64 k = square ? 1 : j + 1; k <= lim; ++k) {
            const u64 r = oracle::rem(a * static_cast<i64>(j * j) + b * static_cast<i64>(j * k) + c * static_cast<i64>(k * k), p);
            if (r) prod = prod * r % p;
        }
    return prod;
}

}  // namespace

TEST(CharacterSum, Examples) {
    // x^2 - 1 has distinct roots: the sum is -1. x^2 has a double root: p - 1.
    EXPECT_EQ(char_sum(1, 0, -1, 7), -1);
    EXPECT_EQ(char_sum(1, 0, 0, 7), 6);
    EXPECT_EQ(char_sum(3, 0, 0, 7), -6);
    EXPECT_EQ(char_sum(0, 1, 5, 11), 0);
    EXPECT_THROW(char_sum(7, 14, 1, 7), std::invalid_argument);
}

TEST(CharacterSum, ClosedFormOnGrid) {
    for (u64 p : arith::sieve_primes(3, 60))
        for (i64 a = -4; a <= 4; ++a)
            for (i64 b = -4; b <= 4; ++b)
                for (i64 c = -4; c <= 4; ++c) {
                    if (oracle::rem(a, p) == 0) continue;
                    i64 direct = 0;
                    for (i64 x = 0; x < static_cast<i64>(p); ++x) direct += oracle::legendre(a * x * x + b * x + c, p);
                    ASSERT_EQ(char_sum(a, b, c, p), direct);
                    ASSERT_EQ(char_sum_closed_form(a, b, c, p), direct) << a << b << c << " " << p;
                }
}

TEST(FormCounts, SquareSumZeroCount) {
    EXPECT_EQ(quadform_counts({1, 0, 1, 13}, 0, CountRegion::triangle_half), 3u);
    EXPECT_EQ(quadform_counts({1, 0, 1, 11}, 0, CountRegion::triangle_half), 0u);
    for (u64 p : arith::sieve_primes(3, 200)) {
        const auto h = quadform_histogram({1, 0, 1, p}, CountRegion::triangle_half);
        for (u64 r = 0; r < p; ++r) ASSERT_EQ(h[r], square_sum_count_closed_form(p, r)) << p << " " << r;
    }
}

TEST(FormCounts, GeneralFormZeroCount) {
    EXPECT_EQ(quadform_counts({1, 1, 1, 7}, 0, CountRegion::triangle_full), 6u);
    for (u64 p : {5u, 7u, 11u, 13u, 29u})
        for (i64 a = -3; a <= 3; ++a)
            for (i64 b = -3; b <= 3; ++b)
                for (i64 c = -3; c <= 3; ++c) {
                    const QuadFormSpec s{a, b, c, p};
                    if (s.divides(a) || s.divides(c) || s.divides(a + b + c)) continue;
                    const auto h = quadform_histogram(s, CountRegion::triangle_full);
                    for (u64 r = 0; r < p; ++r) {
                        u64 direct = 0;
                        for (u64 j = 1; j < p; ++j)
                            for (u64 k = j + 1; k < p; ++k) direct += oracle::rem(s.value(static_cast<i64>(j), static_cast<i64>(k)), p) == r;
                        ASSERT_EQ(h[r], direct);
                        ASSERT_EQ(form_count_closed_form(s, r), direct) << a << "," << b << "," << c << " p=" << p << " n=" << r;
                    }
                }
}

TEST(FormCounts, SquareDifferenceCounts) {
    for (u64 p : arith::sieve_primes(3, 150)) {
        const auto h = quadform_histogram({1, 0, -1, p}, CountRegion::square_half);
        for (u64 r = 1; r < p; ++r) ASSERT_EQ(h[r], square_difference_count_closed_form(p, r)) << p << " " << r;
    }
    // p = 13: 3 pairs for non-residues, 2 for residues.
    EXPECT_EQ(square_difference_count_closed_form(13, 2), 3u);
    EXPECT_EQ(square_difference_count_closed_form(13, 3), 2u);
}

TEST(RestrictedProduct, MatchesNaiveEvaluation) {
    for (u64 p : {3u, 5u, 7u, 11u, 13u, 31u})
        for (i64 a = -3; a <= 3; ++a)
            for (i64 b = -3; b <= 3; ++b)
                for (i64 c = -3; c <= 3; ++c) {
                    const QuadFormSpec s{a, b, c, p};
                    EXPECT_EQ(restricted_product(s, CountRegion::triangle_full).value, naive_product(a, b, c, p, p - 1, false));
                    EXPECT_EQ(restricted_product(s, CountRegion::triangle_half).value, naive_product(a, b, c, p, (p - 1) / 2, false));
                    EXPECT_EQ(restricted_product(s, CountRegion::square_half).value, naive_product(a, b, c, p, (p - 1) / 2, true));
                }
}

TEST(FormProducts, Classification) {
    EXPECT_EQ(classify({1, 1, 1, 7}), ProductPart::ii);
    EXPECT_EQ(classify({1, -3, 2, 7}), ProductPart::iii);
    EXPECT_EQ(classify({0, 1, 0, 7}), ProductPart::iv);
    EXPECT_EQ(classify({7, 1, 2, 7}), ProductPart::iv);
    EXPECT_FALSE(classify({7, 14, 0, 7}).has_value());
}

TEST(FormProducts, DegenerateExample) {
    // prod jk over 1 <= j < k <= 6 is (6!)^5 = -1 (mod 7).
    const Verdict v = verify_form_product({0, 1, 0, 7}, ProductPart::iv);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.lhs, "6");
    EXPECT_EQ(naive_product(0, 1, 0, 7, 6, false), 6u);
}

TEST(FormProducts, SquareProducts) {
    // p = 7: prod (j^2 - i^2) over 1 <= i < j <= 3 and prod (i^2 + j^2).
    const auto v7 = verify_square_products(7);
    ASSERT_EQ(v7.size(), 2u);
    EXPECT_TRUE(v7[0].pass);
    EXPECT_EQ(v7[0].lhs, std::to_string(naive_product(-1, 0, 1, 7, 3, false)));
    EXPECT_EQ(v7[1].lhs, std::to_string(naive_product(1, 0, 1, 7, 3, false)));
    EXPECT_EQ(v7[1].lhs, "6");
    for (u64 p : arith::sieve_primes(3, 400))
        for (const auto& v : verify_square_products(p)) EXPECT_TRUE(v.pass) << v.check << " " << p;
}

TEST(FormProducts, GridSweep) {
    u64 half_square_pos = 0, half_square_neg = 0;
    for (u64 p : arith::sieve_primes(3, 61)) {
        const GridRun run = verify_form_products_on_grid(p, Grid{-3, 3});
        for (const auto& v : run.verdicts) {
            EXPECT_TRUE(v.pass) << v.check << " p=" << p << " " << v.params.dump();
            if (v.observed_sign) (*v.observed_sign > 0 ? half_square_pos : half_square_neg)++;
        }
        if (p <= 3) {
            EXPECT_GT(run.excluded.size(), 0u);
        }
    }
    // Both signs occur, so the sign is data rather than a fixed rule.
    EXPECT_GT(half_square_pos, 0u);
    EXPECT_GT(half_square_neg, 0u);
}

TEST(FormProducts, WrongClosedFormIsCaught) {
    // Swapping the region must change the product for some form.
    bool differs = false;
    for (i64 b = 1; b <= 3 && !differs; ++b)
        differs = restricted_product({1, b, 1, 13}, CountRegion::triangle_half).value != restricted_product({1, b, 1, 13}, CountRegion::triangle_full).value;
    EXPECT_TRUE(differs);
    EXPECT_THROW(verify_form_product({1, 1, 1, 7}, ProductPart::iv), std::invalid_argument);
    EXPECT_THROW(verify_form_product({1, 1, 1, 7}, ProductPart::i), std::invalid_argument);
}

TEST(SupportLemmas, AffineExceedanceExample) {
    // {3x + 2}_7 exceeds x for exactly 3 values of x.
    u64 cnt = 0;
    for (u64 x = 0; x < 7; ++x) cnt += (3 * x + 2) % 7 > x;
    EXPECT_EQ(cnt, 3u);
}

TEST(SupportLemmas, HoldForSmallPrimes) {
    for (u64 p : arith::sieve_primes(3, 101))
        for (const auto& v : verify_support_lemmas(p)) EXPECT_TRUE(v.pass) << v.check << " p=" << p << " " << v.lhs << " vs " << v.rhs;
}

TEST(InversePairs, OddModuli) {
    for (u64 m = 3; m < 3000; m += 2) ASSERT_TRUE(verify_inverse_pair_counts(m).pass) << m;
    EXPECT_THROW(verify_inverse_pair_counts(10), std::invalid_argument);
}
