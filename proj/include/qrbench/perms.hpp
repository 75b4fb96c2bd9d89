#pragma once

// Permutations built from residue maps and their signs by exact inversion
// counting.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrbench/arith.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::perms {

using arith::i64;
using arith::u64;

enum class PermDomain {
    multiplication_units,  // k -> {ak}_p on 1..p-1
    multiplication_full,   // k -> {ak}_n on 0..n-1
    folded_multiplication, // k -> R(ak, n) on 1..(n-1)/2
    inverse_units,         // k -> k^-1 mod m on units in 1..m-1
    folded_inverse_units,  // k -> k* with kk* = +-1 mod m on units below m/2
    square_list,           // k -> {k^2}_p on 1..(p-1)/2
    generic,
};

struct PermSeq {
    std::vector<u64> entries;
    PermDomain domain = PermDomain::generic;
};

struct InversionCount {
    int sign = 1;
    u64 inversions = 0;
};

namespace detail {

// Bottom-up merge sort; counts pairs i < j with v[i] > v[j] strictly.
inline u64 merge_count(std::vector<u64>& v) {
    const std::size_t n = v.size();
    std::vector<u64> buf(n);
    u64 count = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, out = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    count += mid - i;
                    buf[out++] = v[j++];
                } else {
                    buf[out++] = v[i++];
                }
            }
            while (i < mid) buf[out++] = v[i++];
            while (j < hi) buf[out++] = v[j++];
        }
        v.swap(buf);
    }
    return count;
}

}  // namespace detail

/// Number of pairs i < j with v[i] > v[j]; equal entries are not inversions.
inline u64 count_strict_inversions(std::vector<u64> v) { return detail::merge_count(v); }

/// Sign and inversion count of a sequence of distinct keys.
inline InversionCount inversion_sign(const PermSeq& seq) {
    std::vector<u64> v = seq.entries;
    const u64 inv = detail::merge_count(v);
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1]) throw std::invalid_argument("inversion_sign: duplicate entry " + std::to_string(v[i]));
    return {(inv % 2 == 0) ? 1 : -1, inv};
}

inline InversionCount inversion_sign(const std::vector<u64>& entries) {
    return inversion_sign(PermSeq{entries, PermDomain::generic});
}

enum class MultiplicationVariant { prime_units, full_residues };

inline PermSeq multiplication_perm(i64 a, u64 n, MultiplicationVariant variant) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("multiplication_perm: modulus must be odd and >= 3");
    if (arith::gcd(a, static_cast<i64>(n)) != 1) throw std::invalid_argument("multiplication_perm: gcd(a, n) != 1");
    if (variant == MultiplicationVariant::prime_units && !arith::is_prime(n))
        throw std::invalid_argument("multiplication_perm: unit variant needs a prime modulus");
    const u64 ar = arith::mod(a, n);
    PermSeq seq;
    const u64 start = variant == MultiplicationVariant::prime_units ? 1 : 0;
    seq.domain = variant == MultiplicationVariant::prime_units ? PermDomain::multiplication_units
                                                               : PermDomain::multiplication_full;
    seq.entries.reserve(n - start);
    u64 v = arith::mulmod(ar, start, n);
    for (u64 k = start; k < n; ++k) {
        seq.entries.push_back(v);
        v += ar;
        if (v >= n) v -= n;
    }
    return seq;
}

/// Sign of k -> {ak}_n by inversion counting; Zolotarev's lemma predicts (a/p)
/// for the unit variant and the Jacobi symbol (a/n) for the full variant.
inline int zolotarev_sign(i64 a, u64 n, MultiplicationVariant variant) {
    return inversion_sign(multiplication_perm(a, n, variant)).sign;
}

/// Sign of k -> R(ak, n) on 1..(n-1)/2.
inline int pan_sign(i64 a, u64 n) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("pan_sign: modulus must be odd and >= 3");
    if (arith::gcd(a, static_cast<i64>(n)) != 1) throw std::invalid_argument("pan_sign: gcd(a, n) != 1");
    PermSeq seq{{}, PermDomain::folded_multiplication};
    for (u64 k = 1; k <= (n - 1) / 2; ++k) seq.entries.push_back(arith::half_residue(static_cast<i64>(arith::mulmod(arith::mod(a, n), k, n)), n));
    return inversion_sign(seq).sign;
}

inline int pan_sign_closed_form(i64 a, u64 n) {
    const int j = arith::jacobi(a, static_cast<i64>(n));
    return ((n + 1) / 2) % 2 == 0 ? j * j : j;
}

struct InverseSigns {
    int sigma = 1;
    int tau = 1;
};

/// Signs of the inverse map on ascending units of Z/m and of its folded
/// version on units below m/2.
inline InverseSigns sigma_tau_signs(u64 m) {
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("sigma_tau_signs: m must be odd and >= 3");
    PermSeq sigma{{}, PermDomain::inverse_units};
    PermSeq tau{{}, PermDomain::folded_inverse_units};
    for (u64 k = 1; k < m; ++k) {
        if (std::gcd(k, m) != 1) continue;
        const u64 inv = *arith::inverse_mod(static_cast<i64>(k), m);
        sigma.entries.push_back(inv);
        if (2 * k < m) tau.entries.push_back(arith::half_residue(static_cast<i64>(inv), m));
    }
    return {inversion_sign(sigma).sign, inversion_sign(tau).sign};
}

/// Closed forms from the factorization m = p_1^a_1 ... p_r^a_r.
inline InverseSigns sigma_tau_closed_form(u64 m) {
    const auto f = arith::factorize(m);
    const std::size_t r = f.size();
    InverseSigns out;
    if (r == 1 && f[0].first % 4 == 1) out.sigma = -1;
    bool tau_negative = false;
    if (r == 1) {
        const u64 p1 = f[0].first % 8;
        const u64 a1 = static_cast<u64>(f[0].second);
        tau_negative = p1 == 1 || p1 == (4 * a1 + 3) % 8;
    } else if (r == 2) {
        tau_negative = (f[0].first + f[1].first) % 4 == 0;
    }
    if (tau_negative) out.tau = -1;
    return out;
}

inline Verdict verify_inverse_perm_signs(u64 m) {
    const auto t0 = std::chrono::steady_clock::now();
    const InverseSigns direct = sigma_tau_signs(m);
    const InverseSigns closed = sigma_tau_closed_form(m);
    Verdict v;
    v.check = "inverse_perm_signs";
    v.param_name = "m";
    v.param = static_cast<i64>(m);
    v.lhs = "sigma=" + std::to_string(direct.sigma) + ",tau=" + std::to_string(direct.tau);
    v.rhs = "sigma=" + std::to_string(closed.sigma) + ",tau=" + std::to_string(closed.tau);
    v.pass = direct.sigma == closed.sigma && direct.tau == closed.tau;
    if (arith::is_prime(m)) {
        // Prime moduli also satisfy sign(sigma) = -(-1/m), sign(tau) = -(2/m).
        const bool prime_form = direct.sigma == -arith::legendre(-1, m) && direct.tau == -arith::legendre(2, m);
        v.params["prime_form"] = prime_form;
        v.pass = v.pass && prime_form;
    }
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

struct SpStats {
    u64 p = 0;
    int sign = 1;
    u64 s = 0;
    u64 t = 0;
};

/// The list {1^2}_p, ..., {n^2}_p with n = (p-1)/2.
inline PermSeq square_list(u64 p) {
    PermSeq seq{{}, PermDomain::square_list};
    const u64 n = (p - 1) / 2;
    seq.entries.resize(n);
    for (u64 k = 1; k <= n; ++k) seq.entries[k - 1] = k * k % p;
    return seq;
}

/// s(p) by the direct double loop over pairs j < k.
inline u64 count_square_descents(const std::vector<u64>& sq) {
    const std::vector<std::int32_t> v(sq.begin(), sq.end());
    const std::size_t n = v.size();
    u64 s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::int32_t x = v[j];
        std::uint32_t local = 0;
        for (std::size_t k = j + 1; k < n; ++k) local += static_cast<std::uint32_t>(v[k] < x);
        s += local;
    }
    return s;
}

/// t(p): pairs j < k with {k^2 - j^2}_p > p/2.
inline u64 count_difference_descents(const std::vector<u64>& sq, u64 p) {
    const std::vector<std::int32_t> v(sq.begin(), sq.end());
    const std::size_t n = v.size();
    const std::int32_t ip = static_cast<std::int32_t>(p);
    u64 t = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::int32_t x = v[j];
        std::uint32_t local = 0;
        for (std::size_t k = j + 1; k < n; ++k) {
            std::int32_t d = v[k] - x;
            d += d < 0 ? ip : 0;
            local += static_cast<std::uint32_t>(2 * d > ip);
        }
        t += local;
    }
    return t;
}

inline SpStats sp_stats(u64 p) {
    if (!arith::is_odd_prime(p)) throw std::invalid_argument("sp_stats: p must be an odd prime");
    const PermSeq sq = square_list(p);
    SpStats st;
    st.p = p;
    st.s = count_square_descents(sq.entries);
    st.t = count_difference_descents(sq.entries, p);
    st.sign = st.s % 2 == 0 ? 1 : -1;
    return st;
}

}  // namespace qrbench::perms
