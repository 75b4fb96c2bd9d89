#pragma once

// Exact integer determinants by fraction-free elimination, with a
// modular determinant as an independent cross-check.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qrbench/arith.hpp"

namespace qrbench::det {

using arith::i64;
using arith::u64;

using IntMatrix = std::vector<std::vector<i64>>;

/// Bareiss elimination over arbitrary-precision integers.
inline mpz_class bareiss(const IntMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw std::invalid_argument("bareiss: matrix is not square");
        for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(m[i][j]);
    }
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    mpz_class d = a[n - 1][n - 1];
    return sign > 0 ? d : mpz_class(-d);
}

/// Determinant modulo a prime q by Gaussian elimination.
inline u64 determinant_mod(const IntMatrix& m, u64 q) {
    const std::size_t n = m.size();
    std::vector<std::vector<u64>> a(n, std::vector<u64>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = arith::mod(m[i][j], q);
    u64 d = 1 % q;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t r = k;
        while (r < n && a[r][k] == 0) ++r;
        if (r == n) return 0;
        if (r != k) {
            std::swap(a[k], a[r]);
            d = (q - d) % q;
        }
        d = arith::mulmod(d, a[k][k], q);
        const u64 inv = arith::powmod(a[k][k], q - 2, q);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            const u64 f = arith::mulmod(a[i][k], inv, q);
            for (std::size_t j = k; j < n; ++j) a[i][j] = (a[i][j] + q - arith::mulmod(f, a[k][j], q)) % q;
        }
    }
    return d;
}

/// Distinct random primes just below 2^62 from a seeded generator.
inline std::vector<u64> random_primes_62(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<u64> dist(u64{1} << 61, (u64{1} << 62) - 1);
    std::vector<u64> out;
    while (out.size() < count) {
        const u64 c = dist(gen) | 1;
        if (arith::is_prime(c) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

inline u64 mpz_mod_u64(const mpz_class& x, u64 q) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), mpz_class(std::to_string(q)).get_mpz_t());
    return std::stoull(r.get_str());
}

/// True when the exact determinant agrees with the modular one at every prime.
inline bool agrees_modulo(const IntMatrix& m, const mpz_class& exact, const std::vector<u64>& primes) {
    for (const u64 q : primes)
        if (mpz_mod_u64(exact, q) != determinant_mod(m, q)) return false;
    return true;
}

}  // namespace qrbench::det
