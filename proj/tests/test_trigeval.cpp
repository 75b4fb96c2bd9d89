#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qrbench/trigeval.hpp"

using namespace qrbench;
using namespace qrbench::trig;
using arith::i64;
using arith::u64;

namespace {

const long double kPi = std::numbers::pi_v<long double>;

long double naive_sin(i64 n, u64 q) { return std::sin(kPi * static_cast<long double>(n) / static_cast<long double>(q)); }
long double naive_cos(i64 n, u64 q) { return std::cos(kPi * static_cast<long double>(n) / static_cast<long double>(q)); }

i64 least_nonresidue(u64 p) { return static_cast<i64>(arith::PrimeCtx(p).smallest_nonresidue()); }

}  // namespace

TEST(SignedLog, Arithmetic) {
    const SignedLog a = SignedLog::from_value(-2.0), b = SignedLog::from_value(0.25);
    EXPECT_EQ(a.sign, -1);
    EXPECT_NEAR((a * b).value(), -0.5, 1e-15);
    EXPECT_NEAR(a.pow(3).value(), -8.0, 1e-12);
    EXPECT_NEAR(a.pow(-2).value(), 0.25, 1e-15);
    EXPECT_NEAR(a.inverse().value(), -0.5, 1e-15);
    EXPECT_TRUE((a * SignedLog::zero()).is_zero());
    EXPECT_THROW(SignedLog::zero().inverse(), std::domain_error);
    EXPECT_EQ(SignedLog::zero().to_string(), "0");
}

TEST(SignedLog, ToleranceScalesWithFactorsAndMagnitude) {
    // Relative to max(1, |L|) and to sqrt(#factors).
    EXPECT_TRUE(log_close(0.0, 0.9e-9, 1e-9, 1));
    EXPECT_FALSE(log_close(0.0, 1.1e-9, 1e-9, 1));
    EXPECT_TRUE(log_close(0.0, 1.9e-9, 1e-9, 4));
    EXPECT_TRUE(log_close(1000.0, 1000.0 + 0.9e-6, 1e-9, 1));
    EXPECT_FALSE(log_close(1000.0, 1000.0 + 1.1e-6, 1e-9, 1));
    EXPECT_FALSE(slog_match({1, 0.0}, {-1, 0.0}, 1e-9, 1));
    EXPECT_TRUE(slog_match(SignedLog::zero(), SignedLog::zero(), 1e-9, 1));
}

TEST(PolarLog, PhaseArithmetic) {
    PolarLog z(5);
    z.add_phase(5);
    EXPECT_EQ(z.real_sign(), 2);
    PolarLog w(5);
    w.add_phase(15);
    z *= w;
    EXPECT_EQ(z.phase, 0);
    EXPECT_EQ(z.real_sign(), 1);
    z.add_phase(-10);
    EXPECT_EQ(z.phase, 10);
    EXPECT_EQ(z.real_sign(), -1);
    EXPECT_THROW(z *= PolarLog(7), std::invalid_argument);
}

TEST(TrigProduct, MatchesNaiveProduct) {
    for (u64 q : {5u, 12u, 31u, 97u}) {
        TrigProduct tp(q);
        long double naive = 1;
        for (i64 n = -3 * static_cast<i64>(q) + 1; n < 3 * static_cast<i64>(q); n += 7) {
            if (n % static_cast<i64>(q) == 0) continue;
            tp.mul_sin(n);
            naive *= naive_sin(n, q);
            if (2 * n % static_cast<i64>(q) != 0 || (2 * n / static_cast<i64>(q)) % 2 == 0) {
                tp.mul_cos(n);
                naive *= naive_cos(n, q);
            }
        }
        tp.mul_pow2(5);
        naive *= 32;
        const SignedLog r = tp.result();
        EXPECT_EQ(r.sign, naive > 0 ? 1 : -1) << q;
        EXPECT_NEAR(r.log_mag, static_cast<double>(std::log(std::fabs(naive))), 1e-10) << q;
    }
}

TEST(TrigProduct, FullSineProduct) {
    // prod_{k=1}^{q-1} sin(pi k/q) = q / 2^(q-1).
    for (u64 q = 2; q < 300; ++q) {
        TrigProduct tp(q);
        for (i64 k = 1; k < static_cast<i64>(q); ++k) tp.mul_sin(k);
        tp.mul_pow2(static_cast<i64>(q) - 1);
        const SignedLog r = tp.result();
        EXPECT_EQ(r.sign, 1);
        EXPECT_NEAR(r.log_mag, std::log(static_cast<double>(q)), 1e-12 * q) << q;
    }
}

TEST(TrigProduct, CotIdentitiesAndPoles) {
    const u64 q = 13;
    for (i64 x = 1; x < 13; ++x)
        for (i64 y = 1; y < 13; ++y) {
            if (x == y) continue;
            TrigProduct d(q), s(q);
            d.mul_cot_difference(x, y);
            s.mul_cot_sum(x, y);
            const long double cd = 1 / std::tan(kPi * x / q) - 1 / std::tan(kPi * y / q);
            EXPECT_NEAR(d.result().value(), static_cast<double>(cd), 1e-12);
            EXPECT_EQ(d.sign() < 0, intsign::cot_difference_negative(x, y, q));
            if ((x + y) % 13 == 0) {
                EXPECT_EQ(s.sign(), 0);
                continue;
            }
            const long double cs = 1 / std::tan(kPi * x / q) + 1 / std::tan(kPi * y / q);
            EXPECT_NEAR(s.result().value(), static_cast<double>(cs), 1e-12);
            EXPECT_EQ(s.sign() < 0, intsign::cot_sum_negative(x, y, q));
        }
    TrigProduct tp(q);
    EXPECT_THROW(tp.mul_csc(26), std::domain_error);
    tp.mul_sin(13);
    EXPECT_EQ(tp.sign(), 0);
}

TEST(IntegerSigns, AgreeWithFloatingSigns) {
    for (u64 p : {3u, 7u, 13u, 101u})
        for (i64 n = -4 * static_cast<i64>(p); n < 4 * static_cast<i64>(p); ++n) {
            if (n % static_cast<i64>(p) != 0) {
                ASSERT_EQ(intsign::sin_negative(n, p), naive_sin(n, p) < 0) << n;
            }
            if ((2 * n) % static_cast<i64>(p) != 0 || (2 * n / static_cast<i64>(p)) % 2 == 0) {
                ASSERT_EQ(intsign::cos_negative(n, p), naive_cos(n, p) < 0) << n;
            }
        }
}

TEST(HalfSine, NaiveMagnitudeForPrimesThreeModFour) {
    // 2^n prod sin(pi k^2/p) has magnitude sqrt(p) when p == 3 mod 4.
    for (u64 p : arith::sieve_primes(7, 200, arith::ResidueFilter{3, 4})) {
        long double prod = 1;
        for (u64 k = 1; k <= (p - 1) / 2; ++k) prod *= 2 * naive_sin(static_cast<i64>(k * k), p);
        EXPECT_NEAR(static_cast<double>(std::fabs(prod)), std::sqrt(static_cast<double>(p)), 1e-9 * std::sqrt(p)) << p;
        const TrigContext ctx(p, classfield::class_data(p));
        const auto vs = verify_half_sine_cosine(ctx, 1);
        EXPECT_TRUE(vs[0].pass) << p;
        EXPECT_EQ(vs[0].lhs[0], prod > 0 ? '+' : '-') << p;
    }
}

TEST(Verifiers, AllHoldForSmallPrimes) {
    for (u64 p : arith::sieve_primes(5, 151)) {
        const TrigContext ctx(p, classfield::class_data(p));
        const i64 nr = least_nonresidue(p);
        for (i64 a : {i64{1}, nr, nr + 2 * static_cast<i64>(p)}) {
            VerdictList all;
            for (auto&& list : {verify_half_sine_cosine(ctx, a), verify_csc_cot_products(ctx, a), verify_cos_difference_product(ctx, a),
                                verify_square_sum_products(ctx, a)})
                all.insert(all.end(), list.begin(), list.end());
            all.push_back(verify_cyclotomic_product_numeric(ctx, a));
            for (const auto& v : all) EXPECT_TRUE(v.pass) << v.check << " p=" << p << " a=" << a << " " << v.lhs << " vs " << v.rhs;
        }
    }
}

TEST(Verifiers, BinaryFormsOnSmallGrid) {
    for (u64 p : {5u, 7u, 11u, 13u, 17u, 23u, 29u}) {
        const TrigContext ctx(p, classfield::class_data(p));
        for (i64 a = -2; a <= 2; ++a)
            for (i64 b = -2; b <= 2; ++b)
                for (i64 c = -2; c <= 2; ++c) {
                    if (arith::mod(a, p) == 0 || arith::mod(c, p) == 0 || arith::mod(a + b + c, p) == 0) {
                        EXPECT_THROW(verify_binary_form_products(ctx, {a, b, c}), std::invalid_argument);
                        continue;
                    }
                    for (const auto& v : verify_binary_form_products(ctx, {a, b, c}))
                        EXPECT_TRUE(v.pass) << v.check << " p=" << p << " (" << a << "," << b << "," << c << ")";
                }
    }
}

TEST(Verifiers, PrimesOneModFourRecordSignsOnly) {
    const TrigContext ctx(13, classfield::class_data(13));
    for (const auto& v : verify_csc_cot_products(ctx, 1))
        if (v.check == "csc_difference_magnitude") {
            EXPECT_TRUE(v.observed_sign.has_value());
        }
}

TEST(Verifiers, WrongClassNumberIsRejected) {
    // The class number enters the magnitude for p == 1 mod 4 and the sign otherwise.
    auto cd229 = classfield::class_data(229);
    cd229.h_plus = 1;
    const TrigContext bad229(229, cd229);
    EXPECT_FALSE(verify_half_sine_cosine(bad229, 1)[0].pass);
    EXPECT_FALSE(verify_cyclotomic_product_numeric(bad229, 1).pass);
    auto cd23 = classfield::class_data(23);
    cd23.h_minus = 1;
    const TrigContext bad23(23, cd23);
    EXPECT_FALSE(verify_half_sine_cosine(bad23, 1)[0].pass);
    EXPECT_FALSE(verify_cyclotomic_product_numeric(bad23, 1).pass);
}

TEST(Verifiers, TightToleranceStillPassesExactCases) {
    // Exactly representable targets leave rounding well under 1e-12.
    const TrigContext ctx(103, classfield::class_data(103));
    for (const auto& v : verify_half_sine_cosine(ctx, 1, 1e-12)) EXPECT_TRUE(v.pass) << v.check;
}

TEST(Verifiers, RejectBadArguments) {
    const TrigContext ctx(7, classfield::class_data(7));
    EXPECT_THROW(verify_half_sine_cosine(ctx, 14), std::invalid_argument);
    const TrigContext ctx3(3, classfield::class_data(3));
    EXPECT_THROW(verify_half_sine_cosine(ctx3, 1), std::invalid_argument);
}
