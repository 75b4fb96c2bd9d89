#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>

#include "qrbench/cyclo.hpp"

using namespace qrbench;
using namespace qrbench::cyclo;
using arith::i64;
using arith::u64;

namespace {

CycloElem random_elem(u64 p, std::mt19937_64& gen) {
    CycloElem e = CycloElem::constant(p, mpq_class(static_cast<long>(gen() % 7) - 3, 1 + gen() % 3));
    for (u64 k = 1; k < p; ++k) {
        CycloElem t = CycloElem::zeta_power(p, static_cast<i64>(k));
        t *= mpq_class(static_cast<long>(gen() % 11) - 5);
        e += t;
    }
    return e;
}

std::complex<long double> zeta(u64 p, i64 k) {
    const long double th = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) / static_cast<long double>(p);
    return {std::cos(th), std::sin(th)};
}

}  // namespace

TEST(CycloElem, TwoFactorExample) {
    CycloElem x = CycloElem::one(5);
    x.mul_one_minus_zeta(1).mul_one_minus_zeta(4);
    const CycloElem expect = CycloElem::constant(5, 2) - CycloElem::zeta_power(5, 1) - CycloElem::zeta_power(5, 4);
    EXPECT_EQ(x, expect);
}

TEST(CycloElem, CanonicalFormIsUnique) {
    // 1 + zeta + ... + zeta^(p-1) = 0.
    CycloElem s = CycloElem::constant(7, 0);
    for (i64 k = 0; k < 7; ++k) s += CycloElem::zeta_power(7, k);
    EXPECT_EQ(s, CycloElem::constant(7, 0));
    EXPECT_TRUE(s.is_rational());
    EXPECT_EQ(CycloElem::constant(7, mpq_class(3, 4)).rational_value(), mpq_class(3, 4));
    EXPECT_FALSE(CycloElem::zeta_power(7, 2).is_rational());
}

TEST(CycloElem, RingAxioms) {
    std::mt19937_64 gen(11);
    for (u64 p : {3u, 5u, 7u, 13u}) {
        for (int trial = 0; trial < 5; ++trial) {
            const CycloElem a = random_elem(p, gen), b = random_elem(p, gen), c = random_elem(p, gen);
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ(a - a, CycloElem::constant(p, 0));
            EXPECT_EQ(a * CycloElem::one(p), a);
        }
    }
}

TEST(CycloElem, EvaluateMatchesComplexArithmetic) {
    std::mt19937_64 gen(5);
    for (u64 p : {5u, 11u, 17u}) {
        const CycloElem a = random_elem(p, gen), b = random_elem(p, gen);
        const auto za = a.evaluate(), zb = b.evaluate();
        EXPECT_LT(std::abs((a * b).evaluate() - za * zb), 1e-9L);
        CycloElem f = CycloElem::one(p);
        std::complex<long double> direct = 1;
        for (i64 x = 1; x < 5; ++x) {
            f.mul_binomial(x, 2 * x + 1);
            direct *= zeta(p, x) - zeta(p, 2 * x + 1);
            f.mul_binomial_sum(x, 3);
            direct *= zeta(p, x) + zeta(p, 3);
        }
        EXPECT_LT(std::abs(f.evaluate() - direct), 1e-9L * std::max(1.0L, std::abs(direct)));
    }
}

TEST(CycloProduct, FullNormIsP) {
    for (u64 p : arith::sieve_primes(3, 101)) {
        std::vector<CycloFactor> fs;
        for (i64 k = 1; k < static_cast<i64>(p); ++k) fs.push_back(CycloFactor::one_minus(k));
        EXPECT_EQ(cyclo_product(fs, p), CycloElem::constant(p, static_cast<long>(p))) << p;
        fs.pop_back();
        EXPECT_NE(cyclo_product(fs, p), CycloElem::constant(p, static_cast<long>(p))) << p;
    }
}

TEST(GaussSum, SquaresToSignedP) {
    for (u64 p : arith::sieve_primes(3, 101)) {
        const CycloElem g = gauss_sum(1, p);
        const long expect = (p % 4 == 1 ? 1 : -1) * static_cast<long>(p);
        EXPECT_EQ(g * g, CycloElem::constant(p, expect)) << p;
        for (i64 a : {1, 2, 3, -1}) {
            if (static_cast<u64>(a < 0 ? -a : a) % p == 0) continue;
            EXPECT_TRUE(verify_gauss_sum(p, a).pass) << p << " " << a;
        }
    }
    EXPECT_THROW(gauss_sum(7, 7), std::invalid_argument);
}

TEST(QuadSurd, PowersOfUnit) {
    const auto e = QuadSurd::from_unit(classfield::fundamental_unit(5), 5);
    // The golden ratio squares to (3 + sqrt(5)) / 2.
    EXPECT_EQ(e.pow(2), (QuadSurd{5, mpq_class(3, 2), mpq_class(1, 2)}));
    EXPECT_EQ(e.pow(3) * e.pow(-3), (QuadSurd{5, 1, 0}));
    // Lifting through the Gauss sum agrees numerically with x + y sqrt(p).
    const CycloElem g = gauss_sum(1, 13);
    const QuadSurd s{13, mpq_class(1, 2), mpq_class(3, 2)};
    const auto z = s.lift(g).evaluate();
    EXPECT_NEAR(static_cast<double>(z.real()), 0.5 + 1.5 * std::sqrt(13.0), 1e-9);
    EXPECT_NEAR(static_cast<double>(z.imag()), 0.0, 1e-9);
}

TEST(ExactProducts, HoldForSmallPrimes) {
    for (u64 p : arith::sieve_primes(5, 61)) {
        const auto cd = classfield::class_data(p);
        const i64 nr = static_cast<i64>(arith::PrimeCtx(p).smallest_nonresidue());
        for (i64 a : {i64{1}, nr}) {
            EXPECT_TRUE(verify_quadratic_cyclotomic_product(p, a, cd).pass) << p << " " << a;
            EXPECT_TRUE(verify_square_vandermonde_product(p, a, cd).pass) << p << " " << a;
        }
        if (p % 4 == 1) {
            EXPECT_TRUE(verify_class_number_product(p, cd).pass) << p;
        }
    }
}

TEST(ExactProducts, WrongClassNumberFails) {
    auto cd = classfield::class_data(229);
    cd.h_plus = 1;
    EXPECT_FALSE(verify_class_number_product(229, cd).pass);
    auto cd23 = classfield::class_data(23);
    cd23.h_minus = 1;
    EXPECT_FALSE(verify_quadratic_cyclotomic_product(23, 1, cd23).pass);
}
