#pragma once

// Modular arithmetic kernel: primality, Legendre/Jacobi symbols, residue maps
// and the per-prime lookup tables shared by every verifier.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qrbench::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Least nonnegative residue of a modulo m (m > 0).
inline u64 mod(i64 a, u64 m) {
    const i64 mm = static_cast<i64>(m);
    i64 r = a % mm;
    return static_cast<u64>(r < 0 ? r + mm : r);
}

/// Floor division for a signed numerator and positive denominator.
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

inline int parity_sign(i64 e) { return (e % 2 == 0) ? 1 : -1; }

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_odd_prime(u64 n) { return n > 2 && is_prime(n); }

/// Prime factorization by trial division, ascending primes with exponents.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline u64 gcd(i64 a, i64 b) {
    return std::gcd(static_cast<u64>(a < 0 ? -a : a), static_cast<u64>(b < 0 ? -b : b));
}

/// Inverse of a modulo m; nullopt when gcd(a, m) != 1.
inline std::optional<u64> inverse_mod(i64 a, u64 m) {
    i64 r0 = static_cast<i64>(m), r1 = static_cast<i64>(mod(a, m));
    i64 t0 = 0, t1 = 1;
    while (r1 != 0) {
        const i64 q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    if (r0 != 1) return std::nullopt;
    return mod(t0, m);
}

/// Legendre symbol by Euler's criterion. Throws unless p is an odd prime.
inline int legendre(i64 a, u64 p) {
    if (!is_odd_prime(p)) throw std::invalid_argument("legendre: modulus " + std::to_string(p) + " is not an odd prime");
    const u64 r = powmod(mod(a, p), (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

/// Jacobi symbol by the binary reciprocity algorithm (no factoring).
inline int jacobi(i64 a, i64 n) {
    if (n < 1 || n % 2 == 0) throw std::invalid_argument("jacobi: modulus must be odd and positive, got " + std::to_string(n));
    u64 m = static_cast<u64>(n);
    u64 x = mod(a, m);
    int result = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const u64 r = m & 7;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(x, m);
        if ((x & 3) == 3 && (m & 3) == 3) result = -result;
        x %= m;
    }
    return m == 1 ? result : 0;
}

struct ResidueClass {
    u64 value = 0;
    u64 modulus = 1;

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

/// The unique r in [0, n) with a == b*r (mod n). Throws if gcd(b, n) != 1.
inline ResidueClass residue_ratio(i64 a, i64 b, u64 n) {
    if (b == 0) throw std::invalid_argument("residue_ratio: zero divisor");
    const auto inv = inverse_mod(b, n);
    if (!inv) throw std::invalid_argument("residue_ratio: gcd(b, n) != 1");
    return {mulmod(mod(a, n), *inv, n), n};
}

/// The unique r in [0, (n-1)/2] with k congruent to r or -r modulo n.
inline u64 half_residue(i64 k, u64 n) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("half_residue: modulus must be odd and >= 3");
    const u64 r = mod(k, n);
    return r <= n / 2 ? r : n - r;
}

/// Number of 1 <= k <= (p-1)/2 with {k x}_p > k, where x == x_num / x_den (mod p).
inline u64 count_increasing_multiples(i64 x_num, i64 x_den, u64 p) {
    if (mod(x_den, p) == 0) throw std::invalid_argument("count_increasing_multiples: p divides the denominator");
    const u64 x = residue_ratio(x_num, x_den, p).value;
    u64 count = 0, kx = 0;
    for (u64 k = 1; k <= (p - 1) / 2; ++k) {
        kx += x;
        if (kx >= p) kx -= p;
        if (kx > k) ++count;
    }
    return count;
}

struct ResidueFilter {
    u64 residue = 0;
    u64 modulus = 1;
};

/// All primes in [lo, hi], ascending, optionally restricted to one residue class.
inline std::vector<u64> sieve_primes(u64 lo, u64 hi, std::optional<ResidueFilter> filter = std::nullopt) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    std::vector<bool> composite(hi + 1, false);
    for (u64 q = 2; q * q <= hi; ++q) {
        if (composite[q]) continue;
        for (u64 k = q * q; k <= hi; k += q) composite[k] = true;
    }
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n) {
        if (composite[n]) continue;
        if (filter && n % filter->modulus != filter->residue % filter->modulus) continue;
        out.push_back(n);
    }
    return out;
}

/// Immutable per-prime tables: Legendre symbols, modular inverses and a square
/// root of -1 when one exists.
class PrimeCtx {
public:
    explicit PrimeCtx(u64 p) : p_(p) {
        if (!is_odd_prime(p)) throw std::invalid_argument("PrimeCtx: " + std::to_string(p) + " is not an odd prime");
        legendre_.assign(p, -1);
        legendre_[0] = 0;
        for (u64 x = 1; x <= (p - 1) / 2; ++x) legendre_[mulmod(x, x, p)] = 1;

        inverse_.assign(p, 0);
        inverse_[1] = 1;
        for (u64 k = 2; k < p; ++k) inverse_[k] = (p - mulmod(p / k, inverse_[p % k], p)) % p;

        if (p % 4 == 1) {
            // Deterministic scan for a non-residue n; then n^((p-1)/4) squares to -1.
            for (u64 n = 2; n < p; ++n) {
                if (legendre_[n] == -1) {
                    sqrt_minus_one_ = powmod(n, (p - 1) / 4, p);
                    break;
                }
            }
        }
    }

    u64 p() const { return p_; }
    u64 half() const { return (p_ - 1) / 2; }
    u64 reduce(i64 a) const { return mod(a, p_); }

    int legendre(i64 a) const { return legendre_[reduce(a)]; }
    const std::vector<signed char>& legendre_table() const { return legendre_; }

    /// Inverse of k modulo p; k must not be divisible by p.
    u64 inverse(i64 k) const {
        const u64 r = reduce(k);
        if (r == 0) throw std::invalid_argument("PrimeCtx::inverse: zero has no inverse");
        return inverse_[r];
    }

    std::optional<u64> sqrt_minus_one() const { return sqrt_minus_one_; }

    u64 smallest_nonresidue() const {
        for (u64 n = 2; n < p_; ++n)
            if (legendre_[n] == -1) return n;
        return 0;
    }

    /// ((p-1)/2)! mod p.
    u64 half_factorial() const {
        u64 f = 1;
        for (u64 k = 2; k <= half(); ++k) f = mulmod(f, k, p_);
        return f;
    }

private:
    u64 p_;
    std::vector<signed char> legendre_;
    std::vector<u64> inverse_;
    std::optional<u64> sqrt_minus_one_;
};

/// Maps a sign in {-1, +1} to its residue modulo p.
inline u64 sign_residue(int sign, u64 p) { return sign >= 0 ? 1 % p : p - 1; }

}  // namespace qrbench::arith
