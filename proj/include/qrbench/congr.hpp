#pragma once

// Product congruences of binary quadratic forms modulo p and the counting
// lemmas behind them, each checked by direct enumeration.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrbench/arith.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::congr {

using arith::i64;
using arith::u64;

struct QuadFormSpec {
    i64 a = 0, b = 0, c = 0;
    u64 p = 3;

    i64 delta() const { return b * b - 4 * a * c; }
    int delta_symbol() const { return arith::legendre(delta(), p); }
    bool divides(i64 x) const { return arith::mod(x, p) == 0; }
    i64 value(i64 j, i64 k) const { return a * j * j + b * j * k + c * k * k; }
};

enum class CountRegion {
    triangle_half, // 1 <= j < k <= (p-1)/2
    triangle_full, // 1 <= j < k <= p-1
    square_half,   // 1 <= j, k <= (p-1)/2
};

/// Calls f(j, k, Q(j,k) mod p) over the region, stepping Q incrementally in k.
template <class F>
void for_each_form_residue(const QuadFormSpec& s, CountRegion region, F&& f) {
    const u64 p = s.p;
    const u64 lim = region == CountRegion::triangle_full ? p - 1 : (p - 1) / 2;
    const u64 A = arith::mod(s.a, p), B = arith::mod(s.b, p), C = arith::mod(s.c, p);
    for (u64 j = 1; j <= lim; ++j) {
        const u64 k0 = region == CountRegion::square_half ? 1 : j + 1;
        if (k0 > lim) continue;
        // Q(j, k+1) - Q(j, k) = b j + c (2k + 1)
        u64 r = (A * (j * j % p) + B * (j * k0 % p) + C * (k0 * k0 % p)) % p;
        u64 step = (B * j + C * ((2 * k0 + 1) % p)) % p;
        const u64 inc = 2 * C % p;
        for (u64 k = k0; k <= lim; ++k) {
            f(j, k, r);
            r += step;
            if (r >= p) r -= p;
            step += inc;
            if (step >= p) step -= p;
        }
    }
}

/// Sum over x in 0..p-1 of ((a x^2 + b x + c)/p).
inline i64 char_sum(i64 a, i64 b, i64 c, u64 p) {
    if (arith::mod(a, p) == 0 && arith::mod(b, p) == 0) throw std::invalid_argument("char_sum: p divides both a and b");
    const arith::PrimeCtx ctx(p);
    const u64 A = arith::mod(a, p), B = arith::mod(b, p), C = arith::mod(c, p);
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) sum += ctx.legendre(static_cast<i64>((A * x % p * x + B * x + C) % p));
    return sum;
}

inline i64 char_sum_closed_form(i64 a, i64 b, i64 c, u64 p) {
    const int la = arith::legendre(a, p);
    return arith::mod(b * b - 4 * a * c, p) == 0 ? static_cast<i64>(p - 1) * la : -la;
}

/// Histogram over n in 0..p-1 of pairs in the region with Q(j,k) = n (mod p).
inline std::vector<u64> quadform_histogram(const QuadFormSpec& s, CountRegion region) {
    std::vector<u64> h(s.p, 0);
    for_each_form_residue(s, region, [&](u64, u64, u64 r) { ++h[r]; });
    return h;
}

inline u64 quadform_counts(const QuadFormSpec& s, u64 n, CountRegion region) {
    if (n >= s.p) throw std::invalid_argument("quadform_counts: n out of range");
    return quadform_histogram(s, region)[n];
}

/// Pairs j < k <= (p-1)/2 with j^2 + k^2 = n (mod p).
inline u64 square_sum_count_closed_form(u64 p, u64 n) {
    if (n == 0) return p % 4 == 1 ? (p - 1) / 4 : 0;
    const int l2 = arith::legendre(2, p), ln = arith::legendre(static_cast<i64>(n), p);
    return (p + 1) / 8 - static_cast<u64>((1 + l2) / 2 * (1 + ln) / 2);
}

/// Pairs j < k <= p-1 with Q(j,k) = n (mod p), for p not dividing a c (a+b+c).
inline u64 form_count_closed_form(const QuadFormSpec& s, u64 n) {
    const i64 p = static_cast<i64>(s.p);
    const i64 lD = s.delta_symbol();
    if (n == 0) return static_cast<u64>((p - 1) / 2 * (1 + lD));
    const i64 E = (1 - p + p * lD * lD) * arith::legendre(s.a, s.p) + arith::legendre(s.c, s.p) + arith::legendre(s.a + s.b + s.c, s.p);
    return static_cast<u64>((p - 3 - lD - arith::legendre(static_cast<i64>(n), s.p) * E) / 2);
}

/// Pairs 1 <= j, k <= (p-1)/2 with j^2 - k^2 = n (mod p), n != 0.
inline u64 square_difference_count_closed_form(u64 p, u64 n) {
    const u64 base = (p - 1) / 4;
    return base - (p % 4 == 1 && arith::legendre(static_cast<i64>(n), p) == 1 ? 1 : 0);
}

enum class ProductPart { i, ii, ii_half_square, iii, iv };

inline const char* part_name(ProductPart part) {
    switch (part) {
        case ProductPart::i: return "i";
        case ProductPart::ii: return "ii";
        case ProductPart::ii_half_square: return "ii_half_square";
        case ProductPart::iii: return "iii";
        case ProductPart::iv: return "iv";
    }
    return "?";
}

struct RestrictedProduct {
    u64 value = 1; // product of the nonzero residues
    u64 zeros = 0; // pairs with p | Q
};

inline RestrictedProduct restricted_product(const QuadFormSpec& s, CountRegion region) {
    RestrictedProduct out;
    out.value = 1 % s.p;
    for_each_form_residue(s, region, [&](u64, u64, u64 r) {
        if (r == 0)
            ++out.zeros;
        else
            out.value = arith::mulmod(out.value, r, s.p);
    });
    return out;
}

/// Which product statement applies to the triple, or nullopt when p divides a, b and c.
inline std::optional<ProductPart> classify(const QuadFormSpec& s) {
    const bool pa = s.divides(s.a), pb = s.divides(s.b), pc = s.divides(s.c);
    if (pa && pb && pc) return std::nullopt;
    if (pa || pc) return ProductPart::iv;
    if (s.divides(s.a + s.b + s.c)) return ProductPart::iii;
    return ProductPart::ii;
}

namespace detail {

inline int npow(u64 count) { return count % 2 == 0 ? 1 : -1; }

inline u64 as_residue(i64 v, u64 p) { return arith::mod(v, p); }

inline Verdict start(const std::string& check, u64 p) {
    Verdict v;
    v.check = check;
    v.param = static_cast<i64>(p);
    return v;
}

inline void finish(Verdict& v, std::chrono::steady_clock::time_point t0) {
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline void tag_form(Verdict& v, const QuadFormSpec& s) {
    v.params["a"] = s.a;
    v.params["b"] = s.b;
    v.params["c"] = s.c;
}

/// The closed form for parts iii and iv as a residue mod p.
inline u64 degenerate_closed_form(const QuadFormSpec& s, ProductPart part) {
    const u64 p = s.p;
    const i64 a = s.a, b = s.b, c = s.c;
    const int odd_half = arith::parity_sign(static_cast<i64>((p + 1) / 2));
    auto L = [p](i64 x) { return arith::legendre(x, p); };
    auto div = [&](i64 x) { return s.divides(x); };
    auto Np = [p](i64 num, i64 den) { return arith::count_increasing_multiples(num, den, p); };
    int r = 0;
    if (part == ProductPart::iii) {
        r = !div(a - c) ? npow(Np(a, c)) * L(2 * c * (a - c)) : odd_half * L(a);
    } else {
        const bool A = div(a), B = div(b), C = div(c);
        if (A && !B && C)
            r = -L(b);
        else if (A && !B && !C && div(b + c))
            r = -L(c);
        else if (A && !B && !C && !div(b + c))
            r = npow(Np(-c, b)) * L(2);
        else if (A && B && !C)
            r = odd_half * L(c);
        else if (!A && B && C)
            r = odd_half * L(a);
        else if (!A && !B && div(a + b) && C)
            r = odd_half * L(b);
        else if (!A && !B && !div(a + b) && C)
            r = npow(Np(-a, b)) * L(2);
        else
            throw std::logic_error("degenerate_closed_form: no case applies");
    }
    return arith::sign_residue(r, p);
}

}  // namespace detail

/// Products of the nonzero values of a binary quadratic form, checked mod p
/// against their closed forms. The half-square variant compares squares and
/// records the sign relating the two sides.
inline Verdict verify_form_product(const QuadFormSpec& s, ProductPart part) {
    const u64 p = s.p;
    if (!arith::is_odd_prime(p)) throw std::invalid_argument("verify_form_product: p must be an odd prime");
    const auto t0 = std::chrono::steady_clock::now();
    const bool pa = s.divides(s.a), pc = s.divides(s.c), ps = s.divides(s.a + s.b + s.c);
    Verdict v;
    switch (part) {
        case ProductPart::i: {
            if (p % 4 != 1) throw std::invalid_argument("verify_form_product(i): need p = 1 mod 4");
            v = detail::start("square_sum_product_nonzero", p);
            const auto lhs = restricted_product({1, 0, 1, p}, CountRegion::triangle_half);
            const u64 rhs = arith::sign_residue(arith::parity_sign(static_cast<i64>((p - 5) / 8)), p);
            v.lhs = std::to_string(lhs.value);
            v.rhs = std::to_string(rhs);
            v.pass = lhs.value == rhs;
            break;
        }
        case ProductPart::ii: {
            if (pa || pc || ps) throw std::invalid_argument("verify_form_product(ii): need p not dividing a c (a+b+c)");
            v = detail::start("form_product_generic", p);
            const auto lhs = restricted_product(s, CountRegion::triangle_full);
            const int lD = s.delta_symbol();
            const int L = lD == 0 ? arith::legendre(s.a, p) * arith::legendre(s.a + s.b + s.c, p)
                                  : -arith::legendre(s.a, p) * arith::legendre(s.c, p) * arith::legendre(s.a + s.b + s.c, p) * lD;
            const u64 rhs = arith::sign_residue(L, p);
            v.lhs = std::to_string(lhs.value);
            v.rhs = std::to_string(rhs);
            v.pass = lhs.value == rhs;
            v.params["delta_symbol"] = lD;
            break;
        }
        case ProductPart::ii_half_square: {
            if (pa || pc || ps) throw std::invalid_argument("verify_form_product(ii_half_square): need p not dividing a c (a+b+c)");
            if (s.a + s.c != 0) throw std::invalid_argument("verify_form_product(ii_half_square): need a + c = 0");
            v = detail::start("form_product_half_square", p);
            const auto lhs = restricted_product(s, CountRegion::square_half);
            const int lD = s.delta_symbol();
            const bool factorial_case = lD == -1 || (lD == 0 && arith::legendre(2 * s.b, p) == 1);
            const u64 base = factorial_case ? arith::PrimeCtx(p).half_factorial() : 1 % p;
            const u64 l2 = arith::mulmod(lhs.value, lhs.value, p), r2 = arith::mulmod(base, base, p);
            v.lhs = std::to_string(lhs.value) + "^2=" + std::to_string(l2);
            v.rhs = std::to_string(base) + "^2=" + std::to_string(r2);
            v.pass = l2 == r2;
            if (v.pass) v.observed_sign = lhs.value == base ? 1 : -1;
            v.params["delta_symbol"] = lD;
            break;
        }
        case ProductPart::iii: {
            if (pa || pc || !ps) throw std::invalid_argument("verify_form_product(iii): need p not dividing a c and p dividing a+b+c");
            v = detail::start("form_product_root_one", p);
            const auto lhs = restricted_product(s, CountRegion::triangle_full);
            const u64 rhs = detail::degenerate_closed_form(s, part);
            v.lhs = std::to_string(lhs.value);
            v.rhs = std::to_string(rhs);
            v.pass = lhs.value == rhs;
            break;
        }
        case ProductPart::iv: {
            if (!pa && !pc) throw std::invalid_argument("verify_form_product(iv): need p dividing a c");
            if (pa && pc && s.divides(s.b)) throw std::invalid_argument("verify_form_product(iv): p divides a, b and c");
            v = detail::start("form_product_degenerate", p);
            const auto lhs = restricted_product(s, CountRegion::triangle_full);
            const u64 rhs = detail::degenerate_closed_form(s, part);
            v.lhs = std::to_string(lhs.value);
            v.rhs = std::to_string(rhs);
            v.pass = lhs.value == rhs;
            break;
        }
    }
    detail::tag_form(v, s);
    v.params["part"] = part_name(part);
    detail::finish(v, t0);
    return v;
}

/// prod (j^2 - i^2) over 1 <= i < j <= (p-1)/2 and, for p = 3 mod 4, prod (i^2 + j^2).
inline VerdictList verify_square_products(u64 p) {
    if (!arith::is_odd_prime(p)) throw std::invalid_argument("verify_square_products: p must be an odd prime");
    const auto t0 = std::chrono::steady_clock::now();
    VerdictList out;
    const arith::PrimeCtx ctx(p);
    {
        Verdict v = detail::start("square_difference_product", p);
        const auto lhs = restricted_product({-1, 0, 1, p}, CountRegion::triangle_half);
        const u64 rhs = p % 4 == 1 ? (p - ctx.half_factorial()) % p : 1 % p;
        v.lhs = std::to_string(lhs.value);
        v.rhs = std::to_string(rhs);
        v.pass = lhs.value == rhs && lhs.zeros == 0;
        detail::finish(v, t0);
        out.push_back(v);
    }
    if (p % 4 == 3) {
        Verdict v = detail::start("square_sum_product", p);
        const auto lhs = restricted_product({1, 0, 1, p}, CountRegion::triangle_half);
        const u64 rhs = arith::sign_residue(arith::parity_sign(static_cast<i64>((p + 1) / 8)), p);
        v.lhs = std::to_string(lhs.value);
        v.rhs = std::to_string(rhs);
        v.pass = lhs.value == rhs && lhs.zeros == 0;
        detail::finish(v, t0);
        out.push_back(v);
    }
    return out;
}

struct Grid {
    i64 lo = -3;
    i64 hi = 3;

    template <class F>
    void for_each(F&& f) const {
        for (i64 a = lo; a <= hi; ++a)
            for (i64 b = lo; b <= hi; ++b)
                for (i64 c = lo; c <= hi; ++c) f(a, b, c);
    }
};

struct GridRun {
    VerdictList verdicts;
    std::map<std::string, u64> excluded; // reason -> count
};

/// Every applicable product statement for every grid triple at p.
inline GridRun verify_form_products_on_grid(u64 p, const Grid& grid) {
    GridRun run;
    grid.for_each([&](i64 a, i64 b, i64 c) {
        const QuadFormSpec s{a, b, c, p};
        const auto part = classify(s);
        if (!part) {
            ++run.excluded["p divides a, b and c"];
            return;
        }
        run.verdicts.push_back(verify_form_product(s, *part));
        if (*part == ProductPart::ii && a + c == 0) run.verdicts.push_back(verify_form_product(s, ProductPart::ii_half_square));
    });
    if (p % 4 == 1) run.verdicts.push_back(verify_form_product({1, 0, 1, p}, ProductPart::i));
    return run;
}

namespace detail {

/// Aggregates many sub-checks into one verdict; keeps the first mismatch.
class Tally {
public:
    Tally(std::string check, u64 p, std::string param_name = "p") {
        v_.check = std::move(check);
        v_.param_name = std::move(param_name);
        v_.param = static_cast<i64>(p);
        t0_ = std::chrono::steady_clock::now();
    }

    void expect(bool ok, const std::function<std::string()>& lhs, const std::function<std::string()>& rhs,
                const std::function<std::string()>& where = {}) {
        ++cases_;
        if (ok || failed_) {
            failed_ = failed_ || !ok;
            return;
        }
        failed_ = true;
        v_.lhs = lhs();
        v_.rhs = rhs();
        if (where) v_.params["first_mismatch"] = where();
    }

    template <class T>
    void expect_eq(const T& lhs, const T& rhs, const std::function<std::string()>& where = {}) {
        expect(lhs == rhs, [&] { return std::to_string(lhs); }, [&] { return std::to_string(rhs); }, where);
    }

    json& params() { return v_.params; }

    Verdict done() {
        v_.pass = !failed_;
        v_.params["cases"] = cases_;
        if (!failed_) v_.lhs = v_.rhs = "all " + std::to_string(cases_) + " cases agree";
        finish(v_, t0_);
        return v_;
    }

private:
    Verdict v_;
    u64 cases_ = 0;
    bool failed_ = false;
    std::chrono::steady_clock::time_point t0_;
};

inline std::string triple(i64 a, i64 b, i64 c) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

}  // namespace detail

/// Half-range inverse counts for odd m: the count of units k < m/2 with inverse
/// below m/2 has parity [m is a prime power], and the count of pairs i < j < m/2
/// with ij = +-1 is odd exactly under the factorization criterion.
inline Verdict verify_inverse_pair_counts(u64 m) {
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("verify_inverse_pair_counts: m must be odd and >= 3");
    detail::Tally t("inverse_pair_counts", m, "m");
    const auto f = arith::factorize(m);
    const std::size_t r = f.size();
    u64 small_inverse = 0, pm_pairs = 0;
    for (u64 k = 1; 2 * k < m; ++k) {
        const auto inv = arith::inverse_mod(static_cast<i64>(k), m);
        if (!inv) continue;
        if (2 * *inv < m) ++small_inverse;
        // ij = 1 or -1 with k < j < m/2: j is inv or m - inv
        for (const u64 j : {*inv, m - *inv})
            if (j > k && 2 * j < m) ++pm_pairs;
    }
    t.expect_eq<u64>(small_inverse % 2, r == 1 ? 1 : 0, [] { return std::string("count of small inverses"); });
    bool odd = false;
    if (r == 1) {
        const u64 p1 = f[0].first % 8, a1 = static_cast<u64>(f[0].second);
        odd = p1 == 1 || p1 == (4 * a1 + 3) % 8;
    } else if (r == 2) {
        odd = (f[0].first + f[1].first) % 4 == 0;
    }
    t.expect_eq<u64>(pm_pairs % 2, odd ? 1 : 0, [] { return std::string("pairs with ij = +-1"); });
    t.params()["pairs"] = pm_pairs;
    return t.done();
}

/// Counting and sum lemmas at p, each checked by enumeration over the grid
/// triples meeting its hypotheses.
inline VerdictList verify_support_lemmas(u64 p, const Grid& grid = {}) {
    if (!arith::is_odd_prime(p)) throw std::invalid_argument("verify_support_lemmas: p must be an odd prime");
    const i64 ip = static_cast<i64>(p);
    const u64 n = (p - 1) / 2;
    const arith::PrimeCtx ctx(p);
    VerdictList out;

    {
        detail::Tally t("character_sum", p);
        grid.for_each([&](i64 a, i64 b, i64 c) {
            if (arith::mod(a, p) == 0 && arith::mod(b, p) == 0) return;
            t.expect_eq(char_sum(a, b, c, p), char_sum_closed_form(a, b, c, p), [&] { return detail::triple(a, b, c); });
        });
        out.push_back(t.done());
    }
    {
        detail::Tally t("square_sum_counts", p);
        const auto h = quadform_histogram({1, 0, 1, p}, CountRegion::triangle_half);
        for (u64 r = 0; r < p; ++r) t.expect_eq(h[r], square_sum_count_closed_form(p, r), [r] { return "n=" + std::to_string(r); });
        out.push_back(t.done());
    }
    {
        detail::Tally t("form_value_counts", p);
        grid.for_each([&](i64 a, i64 b, i64 c) {
            const QuadFormSpec s{a, b, c, p};
            if (s.divides(a) || s.divides(c) || s.divides(a + b + c)) return;
            const auto h = quadform_histogram(s, CountRegion::triangle_full);
            for (u64 r = 0; r < p; ++r)
                t.expect_eq(h[r], form_count_closed_form(s, r), [&] { return detail::triple(a, b, c) + " n=" + std::to_string(r); });
        });
        out.push_back(t.done());
    }
    {
        detail::Tally t("half_square_zero_parity", p);
        grid.for_each([&](i64 a, i64 b, i64 c) {
            const QuadFormSpec s{a, b, c, p};
            if (a + c != 0 || s.divides(a) || s.divides(b) || s.divides(c)) return;
            const u64 zeros = quadform_histogram(s, CountRegion::square_half)[0];
            const int lD = s.delta_symbol();
            const int want = lD == -1 ? 1 : lD == 0 ? ctx.legendre(2) : ctx.legendre(-1);
            t.expect_eq(detail::npow(zeros), want, [&] { return detail::triple(a, b, c); });
        });
        out.push_back(t.done());
    }
    {
        detail::Tally t("difference_product", p);
        // prod_{i<j<=p-1} (j - i) = prod_{k=1}^{p-2} k!
        u64 prod = 1 % p, fact = 1 % p;
        for (u64 k = 1; k + 1 < p; ++k) {
            fact = arith::mulmod(fact, k, p);
            prod = arith::mulmod(prod, fact, p);
        }
        t.expect_eq(prod, arith::sign_residue(-ctx.legendre(2), p) * ctx.half_factorial() % p);
        out.push_back(t.done());
    }
    {
        detail::Tally t("affine_exceedance_count", p);
        for (u64 a = 2; a < p; ++a)
            for (u64 b = 0; b < p; ++b) {
                u64 cnt = 0, v = b;
                for (u64 x = 0; x < p; ++x) {
                    cnt += v > x;
                    v += a;
                    if (v >= p) v -= p;
                }
                t.expect_eq(cnt, n, [&] { return "a=" + std::to_string(a) + " b=" + std::to_string(b); });
            }
        out.push_back(t.done());
    }
    {
        detail::Tally t("square_difference_counts", p);
        const auto h = quadform_histogram({1, 0, -1, p}, CountRegion::square_half);
        for (u64 r = 1; r < p; ++r) t.expect_eq(h[r], square_difference_count_closed_form(p, r), [r] { return "n=" + std::to_string(r); });
        out.push_back(t.done());
    }
    {
        detail::Tally t("square_sum_total", p);
        u64 total = 0;
        const u64 m2 = 2 * p;
        for (u64 j = 1; j <= n; ++j)
            for (u64 k = j + 1; k <= n; ++k) total = (total + j * j + k * k) % m2;
        t.expect_eq(total, p % 8 == 5 ? p : 0);
        out.push_back(t.done());
    }
    {
        detail::Tally t("square_sum_zero_total_parity", p);
        u64 total = 0;
        for (u64 j = 1; j <= n; ++j)
            for (u64 k = j + 1; k <= n; ++k)
                if ((j * j + k * k) % p == 0) total += (j * j + k * k) / p;
        t.expect_eq<u64>(total % 2, p % 8 == 5 ? 1 : 0);
        out.push_back(t.done());
    }
    if (p > 3) {
        detail::Tally t("form_total", p);
        const u64 m2 = 2 * p;
        grid.for_each([&](i64 a, i64 b, i64 c) {
            if (arith::mod(a, p) == 0) return;
            u64 total = 0;
            const u64 A = arith::mod(a, m2), B = arith::mod(b, m2), C = arith::mod(c, m2);
            for (u64 j = 1; j < p; ++j)
                for (u64 k = j + 1; k < p; ++k) total = (total + A * (j * j % m2) + B * (j * k % m2) + C * (k * k % m2)) % m2;
            const i64 parity = arith::mod(a * (ip - 1) / 2 + b * ((ip - 1) * (ip - 3) / 8), 2);
            t.expect(total % p == 0 && static_cast<i64>(total / p) == parity,
                     [&] { return std::to_string(total) + " mod 2p"; },
                     [&] { return std::to_string(parity * ip) + " mod 2p"; },
                     [&] { return detail::triple(a, b, c); });
        });
        out.push_back(t.done());
    }
    return out;
}

}  // namespace qrbench::congr
