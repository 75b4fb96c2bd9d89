#pragma once

// Exact arithmetic in Q(zeta_p). Elements are kept on the basis
// zeta^1..zeta^(p-1); the zeta^0 coefficient is eliminated with
// 1 + zeta + ... + zeta^(p-1) = 0.

#include <chrono>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qrbench/arith.hpp"
#include "qrbench/classfield.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::cyclo {

using arith::i64;
using arith::u64;

/// sum_k num[k] zeta^k / den, num[0] == 0 and gcd(den, num) == 1 in canonical form.
class CycloElem {
public:
    CycloElem() = default;
    explicit CycloElem(u64 p) : p_(p), num_(p), den_(1) {
        if (!arith::is_odd_prime(p)) throw std::invalid_argument("CycloElem: p must be an odd prime");
    }

    static CycloElem constant(u64 p, const mpq_class& c) {
        CycloElem e(p);
        e.num_[0] = c.get_num();
        e.den_ = c.get_den();
        e.canonicalize();
        return e;
    }

    static CycloElem one(u64 p) { return constant(p, 1); }

    static CycloElem zeta_power(u64 p, i64 k) {
        CycloElem e(p);
        e.num_[arith::mod(k, p)] = 1;
        e.canonicalize();
        return e;
    }

    u64 p() const { return p_; }
    const std::vector<mpz_class>& numerators() const { return num_; }
    const mpz_class& denominator() const { return den_; }

    /// Coefficient of zeta^k, 1 <= k <= p-1, in canonical form.
    mpq_class coeff(u64 k) const {
        mpq_class q(num_.at(k), den_);
        q.canonicalize();
        return q;
    }

    bool is_rational() const {
        for (u64 k = 1; k < p_; ++k)
            if (num_[k] != num_[1]) return false;
        return true;
    }

    /// Value of a rational element (all coefficients equal to -c).
    mpq_class rational_value() const {
        if (!is_rational()) throw std::logic_error("CycloElem::rational_value: element is not rational");
        mpq_class q(-num_[1], den_);
        q.canonicalize();
        return q;
    }

    friend bool operator==(const CycloElem& x, const CycloElem& y) {
        return x.p_ == y.p_ && x.den_ == y.den_ && x.num_ == y.num_;
    }

    CycloElem operator-() const {
        CycloElem r = *this;
        for (auto& c : r.num_) c = -c;
        return r;
    }

    CycloElem& operator+=(const CycloElem& o) { return add_scaled(o, 1); }
    CycloElem& operator-=(const CycloElem& o) { return add_scaled(o, -1); }

    CycloElem& operator*=(const mpq_class& s) {
        for (auto& c : num_) c *= s.get_num();
        den_ *= s.get_den();
        canonicalize();
        return *this;
    }

    /// Multiplies by zeta^e (a cyclic rotation of the full coefficient vector).
    CycloElem& mul_zeta(i64 e) {
        rotate(arith::mod(e, p_));
        canonicalize();
        return *this;
    }

    /// Multiplies by (zeta^x - zeta^y) in O(p) via two rotations.
    CycloElem& mul_binomial(i64 x, i64 y) {
        const u64 rx = arith::mod(x, p_), ry = arith::mod(y, p_);
        std::vector<mpz_class> out(p_);
        for (u64 k = 0; k < p_; ++k) {
            out[(k + rx) % p_] += num_[k];
            out[(k + ry) % p_] -= num_[k];
        }
        num_.swap(out);
        canonicalize();
        return *this;
    }

    /// Multiplies by (zeta^x + zeta^y).
    CycloElem& mul_binomial_sum(i64 x, i64 y) {
        const u64 rx = arith::mod(x, p_), ry = arith::mod(y, p_);
        std::vector<mpz_class> out(p_);
        for (u64 k = 0; k < p_; ++k) {
            out[(k + rx) % p_] += num_[k];
            out[(k + ry) % p_] += num_[k];
        }
        num_.swap(out);
        canonicalize();
        return *this;
    }

    /// Multiplies by (1 - zeta^e).
    CycloElem& mul_one_minus_zeta(i64 e) { return mul_binomial(0, e); }

    friend CycloElem operator*(const CycloElem& x, const CycloElem& y) {
        if (x.p_ != y.p_) throw std::invalid_argument("CycloElem: mismatched primes");
        const u64 p = x.p_;
        CycloElem r(p);
        for (u64 i = 1; i < p; ++i) {
            if (x.num_[i] == 0) continue;
            for (u64 j = 1; j < p; ++j) {
                if (y.num_[j] == 0) continue;
                const u64 k = (i + j) % p;
                mpz_addmul(r.num_[k].get_mpz_t(), x.num_[i].get_mpz_t(), y.num_[j].get_mpz_t());
            }
        }
        r.den_ = x.den_ * y.den_;
        r.canonicalize();
        return r;
    }

    CycloElem& operator*=(const CycloElem& o) { return *this = *this * o; }

    friend CycloElem operator+(CycloElem x, const CycloElem& y) { return x += y; }
    friend CycloElem operator-(CycloElem x, const CycloElem& y) { return x -= y; }

    std::complex<long double> evaluate() const {
        std::complex<long double> s = 0;
        const long double step = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(p_);
        for (u64 k = 1; k < p_; ++k) {
            if (num_[k] == 0) continue;
            const long double c = static_cast<long double>(num_[k].get_d());
            s += c * std::polar(1.0L, step * static_cast<long double>(k));
        }
        return s / static_cast<long double>(den_.get_d());
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "(";
        bool first = true;
        for (u64 k = 1; k < p_; ++k) {
            if (num_[k] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << num_[k].get_str() << "*z^" << k;
        }
        if (first) os << "0";
        os << ")";
        if (den_ != 1) os << "/" << den_.get_str();
        return os.str();
    }

private:
    void rotate(u64 e) {
        if (e == 0) return;
        std::vector<mpz_class> out(p_);
        for (u64 k = 0; k < p_; ++k) out[(k + e) % p_].swap(num_[k]);
        num_.swap(out);
    }

    CycloElem& add_scaled(const CycloElem& o, int sign) {
        if (o.p_ != p_) throw std::invalid_argument("CycloElem: mismatched primes");
        for (u64 k = 0; k < p_; ++k) {
            num_[k] *= o.den_;
            if (sign > 0)
                num_[k] += o.num_[k] * den_;
            else
                num_[k] -= o.num_[k] * den_;
        }
        den_ *= o.den_;
        canonicalize();
        return *this;
    }

    void canonicalize() {
        if (num_[0] != 0) {
            const mpz_class c0 = num_[0];
            for (auto& c : num_) c -= c0;
        }
        if (den_ < 0) {
            den_ = -den_;
            for (auto& c : num_) c = -c;
        }
        if (den_ == 1) return;
        mpz_class g = den_;
        for (u64 k = 1; k < p_ && g != 1; ++k)
            if (num_[k] != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num_[k].get_mpz_t());
        if (g != 1) {
            for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
        }
    }

    u64 p_ = 0;
    std::vector<mpz_class> num_;
    mpz_class den_ = 1;
};

/// One factor of a cyclotomic product.
struct CycloFactor {
    enum class Kind { one_minus_zeta, zeta_power, zeta_difference, zeta_sum, element };
    Kind kind = Kind::one_minus_zeta;
    i64 x = 0;
    i64 y = 0;
    CycloElem elem;

    static CycloFactor one_minus(i64 e) { return {Kind::one_minus_zeta, e, 0, {}}; }
    static CycloFactor power(i64 e) { return {Kind::zeta_power, e, 0, {}}; }
    static CycloFactor difference(i64 x, i64 y) { return {Kind::zeta_difference, x, y, {}}; }
    static CycloFactor sum(i64 x, i64 y) { return {Kind::zeta_sum, x, y, {}}; }
    static CycloFactor of(CycloElem e) { return {Kind::element, 0, 0, std::move(e)}; }
};

inline CycloElem cyclo_product(const std::vector<CycloFactor>& factors, u64 p) {
    CycloElem acc = CycloElem::one(p);
    for (const auto& f : factors) {
        switch (f.kind) {
            case CycloFactor::Kind::one_minus_zeta: acc.mul_one_minus_zeta(f.x); break;
            case CycloFactor::Kind::zeta_power: acc.mul_zeta(f.x); break;
            case CycloFactor::Kind::zeta_difference: acc.mul_binomial(f.x, f.y); break;
            case CycloFactor::Kind::zeta_sum: acc.mul_binomial_sum(f.x, f.y); break;
            case CycloFactor::Kind::element: acc *= f.elem; break;
        }
    }
    return acc;
}

/// sum_{x=0}^{p-1} zeta^(a x^2).
inline CycloElem gauss_sum(i64 a, u64 p) {
    if (arith::mod(a, p) == 0) throw std::invalid_argument("gauss_sum: p divides a");
    std::vector<i64> counts(p, 0);
    for (u64 x = 0; x < p; ++x) ++counts[arith::mulmod(arith::mod(a, p), x * x % p, p)];
    CycloElem acc = CycloElem::constant(p, 0);
    for (u64 k = 0; k < p; ++k) {
        if (counts[k] == 0) continue;
        CycloElem t = CycloElem::zeta_power(p, static_cast<i64>(k));
        t *= mpq_class(counts[k]);
        acc += t;
    }
    return acc;
}

/// x + y sqrt(p) over Q.
struct QuadSurd {
    u64 p = 0;
    mpq_class x = 0;
    mpq_class y = 0;

    static QuadSurd from_unit(const classfield::QuadUnit& e, u64 p) {
        QuadSurd q{p, mpq_class(e.u, e.denom), mpq_class(e.v, e.denom)};
        q.x.canonicalize();
        q.y.canonicalize();
        return q;
    }

    friend QuadSurd operator*(const QuadSurd& a, const QuadSurd& b) {
        const mpq_class pp(static_cast<unsigned long>(a.p));
        return {a.p, a.x * b.x + pp * a.y * b.y, a.x * b.y + a.y * b.x};
    }

    friend bool operator==(const QuadSurd& a, const QuadSurd& b) { return a.p == b.p && a.x == b.x && a.y == b.y; }

    QuadSurd inverse() const {
        const mpq_class n = x * x - mpq_class(static_cast<unsigned long>(p)) * y * y;
        if (n == 0) throw std::domain_error("QuadSurd: zero has no inverse");
        return {p, x / n, -y / n};
    }

    QuadSurd pow(i64 k) const {
        QuadSurd base = k < 0 ? inverse() : *this;
        u64 e = static_cast<u64>(k < 0 ? -k : k);
        QuadSurd acc{p, 1, 0};
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    /// x + y g, with g the Gauss sum standing in for sqrt(p) (p == 1 mod 4).
    CycloElem lift(const CycloElem& g) const {
        CycloElem r = CycloElem::constant(p, x);
        CycloElem t = g;
        t *= y;
        r += t;
        return r;
    }
};

namespace detail {

inline std::string shadow(const CycloElem& e) {
    const auto z = e.evaluate();
    std::ostringstream os;
    os.precision(12);
    os << "~(" << static_cast<double>(z.real()) << "," << static_cast<double>(z.imag()) << ")";
    return os.str();
}

inline Verdict ring_verdict(const std::string& check, u64 p, i64 a, const CycloElem& lhs, const CycloElem& rhs,
                            std::chrono::steady_clock::time_point t0) {
    Verdict v;
    v.check = check;
    v.param = static_cast<i64>(p);
    v.params["a"] = a;
    v.pass = lhs == rhs;
    v.lhs = v.pass ? shadow(lhs) : lhs.to_string();
    v.rhs = v.pass ? shadow(rhs) : rhs.to_string();
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

inline void require_prime_above_3(u64 p, i64 a, const char* who) {
    if (!arith::is_odd_prime(p) || p <= 3) throw std::invalid_argument(std::string(who) + ": need a prime p > 3");
    if (arith::mod(a, p) == 0) throw std::invalid_argument(std::string(who) + ": p divides a");
}

}  // namespace detail

/// prod_{k=1}^{(p-1)/2} (1 - zeta^(a k^2)) against g eps^(-(a/p)h(p)) for
/// p == 1 mod 4, or (-1)^((h(-p)+1)/2) (a/p) g for p == 3 mod 4.
inline Verdict verify_quadratic_cyclotomic_product(u64 p, i64 a, const classfield::ClassData& cd) {
    detail::require_prime_above_3(p, a, "verify_quadratic_cyclotomic_product");
    const auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    CycloElem lhs = CycloElem::one(p);
    for (u64 k = 1; k <= (p - 1) / 2; ++k) lhs.mul_one_minus_zeta(static_cast<i64>(arith::mulmod(arith::mod(a, p), k * k % p, p)));
    const CycloElem g = gauss_sum(1, p);
    CycloElem rhs;
    if (p % 4 == 1) {
        const QuadSurd eps = QuadSurd::from_unit(*cd.unit, p);
        rhs = eps.pow(-la * static_cast<i64>(*cd.h_plus)).lift(g) * g;
    } else {
        rhs = g;
        rhs *= mpq_class(arith::parity_sign(static_cast<i64>((*cd.h_minus + 1) / 2)) * la);
    }
    return detail::ring_verdict("quadratic_cyclotomic_product", p, a, lhs, rhs, t0);
}

/// Vandermonde-type product over pairs j < k of (zeta^(a j^2) - zeta^(a k^2)),
/// squared when p == 1 mod 4.
inline Verdict verify_square_vandermonde_product(u64 p, i64 a, const classfield::ClassData& cd) {
    detail::require_prime_above_3(p, a, "verify_square_vandermonde_product");
    const auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    const u64 n = (p - 1) / 2;
    const u64 ar = arith::mod(a, p);
    CycloElem lhs = CycloElem::one(p);
    for (u64 j = 1; j <= n; ++j)
        for (u64 k = j + 1; k <= n; ++k)
            lhs.mul_binomial(static_cast<i64>(arith::mulmod(ar, j * j % p, p)), static_cast<i64>(arith::mulmod(ar, k * k % p, p)));
    const CycloElem g = gauss_sum(1, p);
    const mpz_class pz = static_cast<unsigned long>(p);
    CycloElem rhs;
    std::string check;
    if (p % 4 == 1) {
        check = "square_vandermonde_product";
        lhs = lhs * lhs;
        // p^((p-3)/4) = p^((p-5)/4) sqrt(p)
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), pz.get_mpz_t(), (p - 5) / 4);
        const QuadSurd eps = QuadSurd::from_unit(*cd.unit, p);
        rhs = eps.pow(la * static_cast<i64>(*cd.h_plus)).lift(g) * g;
        rhs *= mpq_class(pw * arith::parity_sign(static_cast<i64>((p - 1) / 4)));
    } else if (p % 8 == 3) {
        check = "vandermonde_product";
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), mpz_class(-pz).get_mpz_t(), (p - 3) / 8);
        rhs = CycloElem::constant(p, mpq_class(pw));
    } else {
        check = "vandermonde_product";
        // p^((p-3)/8) i = p^((p-7)/8) g
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), pz.get_mpz_t(), (p - 7) / 8);
        const i64 e = static_cast<i64>((p + 1) / 8 + (*cd.h_minus - 1) / 2);
        rhs = g;
        rhs *= mpq_class(pw * arith::parity_sign(e) * la);
    }
    return detail::ring_verdict(check, p, a, lhs, rhs, t0);
}

/// prod_{(n/p)=1} (1 - zeta^n) eps^(2h(p)) == prod_{(n/p)=-1} (1 - zeta^n), p == 1 mod 4.
inline Verdict verify_class_number_product(u64 p, const classfield::ClassData& cd) {
    if (!arith::is_odd_prime(p) || p % 4 != 1) throw std::invalid_argument("verify_class_number_product: need a prime p == 1 mod 4");
    const auto t0 = std::chrono::steady_clock::now();
    const arith::PrimeCtx ctx(p);
    CycloElem res = CycloElem::one(p), non = CycloElem::one(p);
    for (u64 n = 1; n < p; ++n) {
        if (ctx.legendre(static_cast<i64>(n)) == 1)
            res.mul_one_minus_zeta(static_cast<i64>(n));
        else
            non.mul_one_minus_zeta(static_cast<i64>(n));
    }
    const CycloElem g = gauss_sum(1, p);
    const QuadSurd eps = QuadSurd::from_unit(*cd.unit, p);
    const CycloElem lhs = res * eps.pow(2 * static_cast<i64>(*cd.h_plus)).lift(g);
    return detail::ring_verdict("class_number_product", p, 1, lhs, non, t0);
}

/// g_a^2 == (-1)^((p-1)/2) p and g_a == (a/p) g_1.
inline Verdict verify_gauss_sum(u64 p, i64 a) {
    const auto t0 = std::chrono::steady_clock::now();
    const CycloElem ga = gauss_sum(a, p);
    const CycloElem g1 = gauss_sum(1, p);
    const CycloElem sq = ga * ga;
    CycloElem twisted = g1;
    twisted *= mpq_class(arith::legendre(a, p));
    const i64 expect = (p % 4 == 1 ? 1 : -1) * static_cast<i64>(p);
    Verdict v = detail::ring_verdict("gauss_sum", p, a, sq, CycloElem::constant(p, expect), t0);
    v.pass = v.pass && ga == twisted;
    return v;
}

}  // namespace qrbench::cyclo
