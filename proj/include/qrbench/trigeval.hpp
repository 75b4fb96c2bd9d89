#pragma once

// Trigonometric products over quadratic residues, evaluated as exponent
// histograms over a table of log|sin| and log|cos| values. Factor signs come
// from integer residue tests, never from the sign of a float.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrbench/arith.hpp"
#include "qrbench/classfield.hpp"
#include "qrbench/signed_log.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::trig {

using arith::i64;
using arith::u64;

inline constexpr double kDefaultTolerance = 1e-9;

/// log|sin(pi r / q)| and log|cos(pi r / q)| for r = 0..q-1.
struct TrigTable {
    u64 q = 0;
    std::vector<long double> log_sin;
    std::vector<long double> log_cos;

    explicit TrigTable(u64 modulus) : q(modulus), log_sin(modulus), log_cos(modulus) {
        const long double pi = std::numbers::pi_v<long double>;
        const long double qq = static_cast<long double>(q);
        for (u64 r = 0; r < q; ++r) {
            const u64 rs = std::min(r, q - r);
            log_sin[r] = r == 0 ? -INFINITY : std::log(std::sin(pi * static_cast<long double>(rs) / qq));
            // |cos(pi r/q)| = sin(pi |q - 2r| / (2q))
            const i64 d = static_cast<i64>(q) - 2 * static_cast<i64>(r);
            const u64 ad = static_cast<u64>(d < 0 ? -d : d);
            log_cos[r] = ad == 0 ? -INFINITY : std::log(std::sin(pi * static_cast<long double>(ad) / (2.0L * qq)));
        }
    }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(long double x) {
        const long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

/// Product of sin/cos factors at angles pi n / q, held as exponent histograms.
class TrigProduct {
public:
    explicit TrigProduct(u64 q) : q_(q), sin_exp_(q, 0), cos_exp_(q, 0) {
        if (q == 0) throw std::invalid_argument("TrigProduct: zero denominator");
    }

    u64 q() const { return q_; }
    u64 factors() const { return factors_; }

    /// sin(pi n / q)^e for e = +1 or -1.
    void mul_sin(i64 n, int e = 1) { mul_sin_reduced(arith::mod(n, 2 * q_), e); }

    /// As mul_sin with r already reduced to [0, 2q).
    void mul_sin_reduced(u64 r, int e = 1) {
        const u64 rq = r < q_ ? r : r - q_;
        if (rq == 0) {
            if (e < 0) throw std::domain_error("TrigProduct: pole of csc/cot at an integer angle");
            zero_ = true;
            return;
        }
        sin_exp_[rq] += e;
        neg_ += r > q_;
        ++factors_;
    }

    void mul_cos(i64 n, int e = 1) { mul_cos_reduced(arith::mod(n, 2 * q_), e); }

    void mul_cos_reduced(u64 r, int e = 1) {
        if (2 * r == q_ || 2 * r == 3 * q_) {
            if (e < 0) throw std::domain_error("TrigProduct: pole of sec at a half-integer angle");
            zero_ = true;
            return;
        }
        cos_exp_[r < q_ ? r : r - q_] += e;
        neg_ += (q_ < 2 * r && 2 * r < 3 * q_);
        ++factors_;
    }

    void mul_csc(i64 n) { mul_sin(n, -1); }

    /// cot(pi x/q) - cot(pi y/q) = sin(pi (y-x)/q) / (sin(pi x/q) sin(pi y/q)).
    void mul_cot_difference(i64 x, i64 y) {
        mul_sin(x, -1);
        mul_sin(y, -1);
        mul_sin(y - x);
        factors_ -= 2;
    }

    /// cot(pi x/q) + cot(pi y/q) = sin(pi (x+y)/q) / (sin(pi x/q) sin(pi y/q)).
    void mul_cot_sum(i64 x, i64 y) {
        mul_sin(x, -1);
        mul_sin(y, -1);
        mul_sin(x + y);
        factors_ -= 2;
    }

    void mul_pow2(i64 k) { log2_exp_ += k; }

    int sign() const { return zero_ ? 0 : (neg_ % 2 == 0 ? 1 : -1); }

    SignedLog result() const { return result(TrigTable(q_)); }

    SignedLog result(const TrigTable& table) const {
        if (zero_) return SignedLog::zero();
        CompensatedSum s;
        for (u64 r = 1; r < q_; ++r)
            if (sin_exp_[r]) s.add(static_cast<long double>(sin_exp_[r]) * table.log_sin[r]);
        for (u64 r = 0; r < q_; ++r)
            if (cos_exp_[r]) s.add(static_cast<long double>(cos_exp_[r]) * table.log_cos[r]);
        s.add(static_cast<long double>(log2_exp_) * std::numbers::ln2_v<long double>);
        return {sign(), static_cast<double>(s.value())};
    }

private:
    u64 q_;
    std::vector<i64> sin_exp_;
    std::vector<i64> cos_exp_;
    i64 log2_exp_ = 0;
    u64 neg_ = 0;
    u64 factors_ = 0;
    bool zero_ = false;
};

enum class TrigKind { sin, cos, csc, cot_difference, cot_sum };

/// Product of f(pi n / q) over the numerators.
inline SignedLog slog_product(u64 q, TrigKind kind, const std::vector<i64>& nums) {
    TrigProduct tp(q);
    for (const i64 n : nums) {
        switch (kind) {
            case TrigKind::sin: tp.mul_sin(n); break;
            case TrigKind::cos: tp.mul_cos(n); break;
            case TrigKind::csc: tp.mul_csc(n); break;
            default: throw std::invalid_argument("slog_product: cot kinds take angle pairs");
        }
    }
    return tp.result();
}

/// Product of cot(pi x/q) -+ cot(pi y/q) over the pairs.
inline SignedLog slog_product(u64 q, TrigKind kind, const std::vector<std::pair<i64, i64>>& pairs) {
    TrigProduct tp(q);
    for (const auto& [x, y] : pairs) {
        if (kind == TrigKind::cot_difference)
            tp.mul_cot_difference(x, y);
        else if (kind == TrigKind::cot_sum)
            tp.mul_cot_sum(x, y);
        else
            throw std::invalid_argument("slog_product: pair form needs a cot kind");
    }
    return tp.result();
}

/// Signs recomputed by counting negative factors with the monotonicity of
/// cot on (0, pi) and the sign pattern of sin/cos over a period.
namespace intsign {

/// sin(pi n/p) < 0 iff {n}_{2p} > p.
inline bool sin_negative(i64 n, u64 p) { return arith::mod(n, 2 * p) > p; }
/// cos(pi n/p) < 0 iff p/2 < {n}_{2p} < 3p/2.
inline bool cos_negative(i64 n, u64 p) {
    const u64 r = arith::mod(n, 2 * p);
    return p < 2 * r && 2 * r < 3 * p;
}
/// cot(pi x/p) - cot(pi y/p) < 0 iff {x}_p > {y}_p.
inline bool cot_difference_negative(i64 x, i64 y, u64 p) { return arith::mod(x, p) > arith::mod(y, p); }
/// cot(pi x/p) + cot(pi y/p) < 0 iff {x}_p + {y}_p > p.
inline bool cot_sum_negative(i64 x, i64 y, u64 p) { return arith::mod(x, p) + arith::mod(y, p) > p; }

inline int from_count(u64 negatives) { return negatives % 2 == 0 ? 1 : -1; }

}  // namespace intsign

/// Per-prime inputs shared by the identity checks.
struct TrigContext {
    u64 p = 0;
    u64 n = 0;
    int legendre_2 = 0;
    int legendre_m1 = 0;
    u64 h = 0;             // h(p) or h(-p)
    long double log_eps = 0; // p == 1 mod 4 only
    TrigTable table;

    TrigContext(u64 prime, const classfield::ClassData& cd)
        : p(prime), n((prime - 1) / 2), legendre_2(arith::legendre(2, prime)), legendre_m1(arith::legendre(-1, prime)), table(prime) {
        if (p % 4 == 1) {
            h = *cd.h_plus;
            log_eps = cd.log_eps;
        } else {
            h = *cd.h_minus;
        }
    }
};

namespace detail {

inline int psign(i64 e) { return arith::parity_sign(e); }

inline Verdict make_verdict(const std::string& check, u64 p, i64 a, std::chrono::steady_clock::time_point t0) {
    Verdict v;
    v.check = check;
    v.param = static_cast<i64>(p);
    v.params["a"] = a;
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

/// Signed comparison; the integer sign path must agree with the histogram sign.
inline Verdict signed_check(const std::string& check, u64 p, i64 a, const SignedLog& lhs, const SignedLog& rhs,
                            int integer_sign, double tol, double factors, std::chrono::steady_clock::time_point t0) {
    Verdict v = make_verdict(check, p, a, t0);
    v.lhs = lhs.to_string();
    v.rhs = rhs.to_string();
    v.params["factors"] = factors;
    v.params["integer_sign_agrees"] = integer_sign == lhs.sign;
    v.pass = slog_match(lhs, rhs, tol, factors) && integer_sign == lhs.sign;
    return v;
}

/// Magnitude-only comparison; the sign is recorded, not asserted.
inline Verdict magnitude_check(const std::string& check, u64 p, i64 a, const SignedLog& lhs, double rhs_log,
                               int observed, double tol, double factors, std::chrono::steady_clock::time_point t0) {
    Verdict v = make_verdict(check, p, a, t0);
    v.lhs = "|" + SignedLog{1, lhs.log_mag}.to_string() + "|";
    v.rhs = "|" + SignedLog{1, rhs_log}.to_string() + "|";
    v.params["factors"] = factors;
    v.observed_sign = observed;
    v.pass = lhs.sign != 0 && log_close(lhs.log_mag, rhs_log, tol, factors);
    return v;
}

inline Verdict parity_check(const std::string& check, u64 p, i64 a, i64 lhs, i64 rhs, std::chrono::steady_clock::time_point t0) {
    Verdict v = make_verdict(check, p, a, t0);
    v.lhs = std::to_string(lhs);
    v.rhs = std::to_string(rhs);
    v.pass = lhs == rhs;
    return v;
}

inline double log_base(u64 p) {
    // log(2^(p-1) / p)
    return static_cast<double>(static_cast<long double>(p - 1) * std::numbers::ln2_v<long double> - std::log(static_cast<long double>(p)));
}

inline std::vector<u64> scaled_squares_mod_2p(u64 p, i64 a) {
    const u64 n = (p - 1) / 2, m = 2 * p;
    const u64 ar = arith::mod(a, m);
    std::vector<u64> x(n + 1, 0);
    for (u64 k = 1; k <= n; ++k) x[k] = arith::mulmod(ar, k * k % m, m);
    return x;
}

inline void require(u64 p, i64 a) {
    if (!arith::is_odd_prime(p)) throw std::invalid_argument("trig: p must be an odd prime");
    if (arith::mod(a, p) == 0) throw std::invalid_argument("trig: p divides a");
}

}  // namespace detail

/// 2^n prod sin(pi a k^2/p) and 2^n prod cos(pi a k^2/p), k = 1..n = (p-1)/2.
inline VerdictList verify_half_sine_cosine(const TrigContext& ctx, i64 a, double tol = kDefaultTolerance) {
    const u64 p = ctx.p;
    detail::require(p, a);
    if (p <= 3) throw std::invalid_argument("verify_half_sine_cosine: need p > 3");
    auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    const auto x = detail::scaled_squares_mod_2p(p, a);
    TrigProduct sp(p), cp(p);
    sp.mul_pow2(static_cast<i64>(ctx.n));
    cp.mul_pow2(static_cast<i64>(ctx.n));
    u64 neg_s = 0, neg_c = 0;
    for (u64 k = 1; k <= ctx.n; ++k) {
        sp.mul_sin_reduced(x[k]);
        cp.mul_cos_reduced(x[k]);
        neg_s += intsign::sin_negative(static_cast<i64>(x[k]), p);
        neg_c += intsign::cos_negative(static_cast<i64>(x[k]), p);
    }
    const SignedLog sl = sp.result(ctx.table), cl = cp.result(ctx.table);
    const double half_log_p = 0.5 * std::log(static_cast<double>(p));
    const i64 ai = a;
    SignedLog rs, rc;
    const i64 h = static_cast<i64>(ctx.h);
    if (p % 4 == 1) {
        rs = {detail::psign((ai + 1) * static_cast<i64>((p + 1) / 4)), half_log_p - static_cast<double>(la * h * ctx.log_eps)};
        rc = {detail::psign(ai * static_cast<i64>((p - 1) / 4)), static_cast<double>((1 - ctx.legendre_2) * la * h * ctx.log_eps)};
    } else {
        rs = {detail::psign((ai + 1) * static_cast<i64>((p + 1) / 4)) * detail::psign((h + 1) / 2) * la, half_log_p};
        rc = {detail::psign((ai + 1) * static_cast<i64>((p + 1) / 4)), 0.0};
    }
    VerdictList out;
    out.push_back(detail::signed_check("half_sine_product", p, a, sl, rs, intsign::from_count(neg_s), tol, static_cast<double>(ctx.n), t0));
    out.push_back(detail::signed_check("half_cosine_product", p, a, cl, rc, intsign::from_count(neg_c), tol, static_cast<double>(ctx.n), t0));
    return out;
}

/// prod csc(pi a (k^2 - j^2)/p) and prod (cot(pi a j^2/p) - cot(pi a k^2/p))
/// over 1 <= j < k <= n.
inline VerdictList verify_csc_cot_products(const TrigContext& ctx, i64 a, double tol = kDefaultTolerance) {
    const u64 p = ctx.p;
    detail::require(p, a);
    auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    const auto x = detail::scaled_squares_mod_2p(p, a);
    const u64 m = 2 * p;
    TrigProduct csc(p), cot(p);
    u64 neg_csc = 0, neg_cot = 0;
    for (u64 j = 1; j <= ctx.n; ++j) {
        for (u64 k = j + 1; k <= ctx.n; ++k) {
            const u64 d = x[k] >= x[j] ? x[k] - x[j] : x[k] + m - x[j];
            csc.mul_sin_reduced(d, -1);
            neg_csc += d > p;
            cot.mul_sin_reduced(x[j], -1);
            cot.mul_sin_reduced(x[k], -1);
            cot.mul_sin_reduced(d);
            neg_cot += intsign::cot_difference_negative(static_cast<i64>(x[j]), static_cast<i64>(x[k]), p);
        }
    }
    const double factors = static_cast<double>(ctx.n * (ctx.n - 1) / 2);
    const SignedLog cl = csc.result(ctx.table), tl = cot.result(ctx.table);
    const double base = static_cast<double>(p - 3) / 8.0 * detail::log_base(p);
    const i64 h = static_cast<i64>(ctx.h);
    VerdictList out;
    if (p % 4 == 3) {
        const int s = p % 8 == 3 ? 1 : detail::psign((h + 1) / 2) * la;
        const SignedLog r{s, base};
        out.push_back(detail::signed_check("csc_difference_product", p, a, cl, r, intsign::from_count(neg_csc), tol, factors, t0));
        out.push_back(detail::signed_check("cot_difference_product", p, a, tl, r, intsign::from_count(neg_cot), tol, factors, t0));
    } else {
        const int pre = detail::psign((a - 1) * static_cast<i64>((p - 1) / 4));
        const SignedLog lhs{pre * cl.sign, cl.log_mag};
        const double shift = static_cast<double>(static_cast<long double>(la * h) * static_cast<long double>(p - 1) / 2.0L * ctx.log_eps);
        const SignedLog rhs{tl.sign, tl.log_mag - shift};
        Verdict rel = detail::signed_check("csc_cot_relation", p, a, lhs, rhs, intsign::from_count(neg_csc) * pre, tol, factors, t0);
        rel.pass = rel.pass && intsign::from_count(neg_cot) == tl.sign;
        out.push_back(rel);
        const double mag = base - static_cast<double>(static_cast<long double>(la * h) / 2.0L * ctx.log_eps);
        out.push_back(detail::magnitude_check("csc_difference_magnitude", p, a, lhs, mag, lhs.sign, tol, factors, t0));
    }
    return out;
}

/// prod over j < k of (zeta^(a j^2) + zeta^(a k^2)) with its phase tracked exactly.
inline PolarLog zeta_sum_pair_product(const TrigContext& ctx, i64 a) {
    const u64 p = ctx.p;
    const u64 ar = arith::mod(a, p);
    std::vector<u64> y(ctx.n + 1, 0);
    for (u64 k = 1; k <= ctx.n; ++k) y[k] = arith::mulmod(ar, k * k % p, p);
    TrigProduct mag(p);
    PolarLog out(p);
    i64 phase = 0;
    const i64 period = static_cast<i64>(4 * p);
    for (u64 j = 1; j <= ctx.n; ++j) {
        for (u64 k = j + 1; k <= ctx.n; ++k) {
            // zeta^x + zeta^y = e^(i pi (x+y)/p) 2 cos(pi (x-y)/p)
            const i64 diff = static_cast<i64>(y[j]) - static_cast<i64>(y[k]);
            const u64 r = arith::mod(diff, 2 * p);
            mag.mul_cos_reduced(r);
            phase += 2 * static_cast<i64>(y[j] + y[k]);
            if (p < 2 * r && 2 * r < 3 * p) phase += 2 * static_cast<i64>(p);
            phase %= period;
        }
    }
    mag.mul_pow2(static_cast<i64>(ctx.n * (ctx.n - 1) / 2));
    const SignedLog m = mag.result(ctx.table);
    out.log_mag = m.log_mag;
    out.zero = m.sign == 0;
    // mag already folded the cos signs into the phase; its own sign is ignored.
    out.add_phase(phase);
    return out;
}

/// prod cos(pi a (k^2 - j^2)/p) against the zeta-sum product and its closed form;
/// also the parity of pairs with 1/4 < |{k^2/p} - {j^2/p}| < 3/4.
inline VerdictList verify_cos_difference_product(const TrigContext& ctx, i64 a, double tol = kDefaultTolerance) {
    const u64 p = ctx.p;
    detail::require(p, a);
    auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    const auto x = detail::scaled_squares_mod_2p(p, a);
    const u64 m = 2 * p;
    TrigProduct cp(p);
    u64 neg = 0;
    for (u64 j = 1; j <= ctx.n; ++j) {
        for (u64 k = j + 1; k <= ctx.n; ++k) {
            const u64 d = x[k] >= x[j] ? x[k] - x[j] : x[k] + m - x[j];
            cp.mul_cos_reduced(d);
            neg += intsign::cos_negative(static_cast<i64>(d), p);
        }
    }
    const double factors = static_cast<double>(ctx.n * (ctx.n - 1) / 2);
    cp.mul_pow2(static_cast<i64>((p - 1) * (p - 3) / 8));
    const SignedLog c = cp.result(ctx.table);
    const int pre = detail::psign(a * static_cast<i64>((p + 1) / 2) * static_cast<i64>((p - 1) / 4));
    const SignedLog lhs{pre * c.sign, c.log_mag};
    const PolarLog z = zeta_sum_pair_product(ctx, a);
    const int zsign = z.real_sign();

    VerdictList out;
    Verdict eq = detail::signed_check("cos_zeta_sum_relation", p, a, lhs, SignedLog{zsign == 2 ? 0 : zsign, z.log_mag},
                                      intsign::from_count(neg) * pre, tol, factors, t0);
    eq.rhs = z.to_string();
    eq.pass = eq.pass && zsign != 2;
    out.push_back(eq);
    if (p % 4 == 3) {
        out.push_back(detail::signed_check("cos_difference_product", p, a, lhs, SignedLog{1, 0.0}, intsign::from_count(neg) * pre, tol, factors, t0));
        u64 count = 0;
        std::vector<i64> sq(ctx.n + 1);
        for (u64 k = 1; k <= ctx.n; ++k) sq[k] = static_cast<i64>(k * k % p);
        for (u64 j = 1; j <= ctx.n; ++j)
            for (u64 k = j + 1; k <= ctx.n; ++k) {
                const i64 d = sq[k] > sq[j] ? sq[k] - sq[j] : sq[j] - sq[k];
                count += static_cast<i64>(p) < 4 * d && 4 * d < 3 * static_cast<i64>(p);
            }
        Verdict par = detail::parity_check("quarter_gap_parity", p, a, static_cast<i64>(count % 2), 0, t0);
        par.params["count"] = count;
        out.push_back(par);
    } else {
        const double mag = static_cast<double>(static_cast<long double>(la * static_cast<i64>(ctx.h) * (ctx.legendre_2 - 1)) / 2.0L * ctx.log_eps);
        out.push_back(detail::magnitude_check("cos_difference_magnitude", p, a, lhs, mag, lhs.sign, tol, factors, t0));
    }
    return out;
}

/// Products over pairs j < k of sin, cos of pi a (j^2+k^2)/p and of
/// cot(pi a j^2/p) + cot(pi a k^2/p), plus the wrapped-sum parity.
inline VerdictList verify_square_sum_products(const TrigContext& ctx, i64 a, double tol = kDefaultTolerance) {
    const u64 p = ctx.p;
    detail::require(p, a);
    auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    const auto x = detail::scaled_squares_mod_2p(p, a);
    const u64 m = 2 * p;
    TrigProduct sp(p), cp(p), tp(p);
    u64 neg_s = 0, neg_c = 0, neg_t = 0, wrapped = 0;
    u64 f_sin = 0, f_all = 0;
    for (u64 j = 1; j <= ctx.n; ++j) {
        for (u64 k = j + 1; k <= ctx.n; ++k) {
            u64 s = x[j] + x[k];
            if (s >= m) s -= m;
            ++f_all;
            cp.mul_cos_reduced(s);
            neg_c += intsign::cos_negative(static_cast<i64>(s), p);
            const u64 yj = x[j] % p, yk = x[k] % p;
            wrapped += yj + yk > p;
            if (s % p == 0) continue;
            ++f_sin;
            sp.mul_sin_reduced(s);
            neg_s += s > p;
            tp.mul_sin_reduced(x[j], -1);
            tp.mul_sin_reduced(x[k], -1);
            tp.mul_sin_reduced(s);
            neg_t += intsign::cot_sum_negative(static_cast<i64>(x[j]), static_cast<i64>(x[k]), p);
        }
    }
    const SignedLog sl = sp.result(ctx.table), cl = cp.result(ctx.table), tl = tp.result(ctx.table);
    const i64 h = static_cast<i64>(ctx.h);
    const double ex = static_cast<double>(static_cast<i64>(p) - ctx.legendre_m1 - 4) / 8.0 * -detail::log_base(p);
    int branch_sign;
    double sin_log = ex, cot_log = -ex;
    if (p % 4 == 1) {
        branch_sign = 1;
        sin_log += static_cast<double>(static_cast<long double>(la * h * (1 + ctx.legendre_2)) / 2.0L * ctx.log_eps);
        cot_log += static_cast<double>(static_cast<long double>(la * h * (static_cast<i64>(p) + ctx.legendre_2 - 4)) / 2.0L * ctx.log_eps);
    } else if (p % 8 == 3) {
        branch_sign = detail::psign(static_cast<i64>((p - 3) / 8));
    } else {
        branch_sign = detail::psign(static_cast<i64>((p + 1) / 8) + (h + 1) / 2) * la;
    }
    const int cos_sign = detail::psign(a * static_cast<i64>((p + 1) / 2) * static_cast<i64>((p - 1) / 4));
    const double cos_log = -static_cast<double>(((p - 1) / 2) * ((p - 3) / 4)) * std::numbers::ln2;

    VerdictList out;
    if (p > 3) {
        out.push_back(detail::signed_check("sine_square_sum_product", p, a, sl, SignedLog{branch_sign, sin_log},
                                           intsign::from_count(neg_s), tol, static_cast<double>(f_sin), t0));
        out.push_back(detail::signed_check("cot_sum_product", p, a, tl, SignedLog{branch_sign, cot_log},
                                           intsign::from_count(neg_t), tol, static_cast<double>(f_sin), t0));
    }
    out.push_back(detail::signed_check("cosine_square_sum_product", p, a, cl, SignedLog{cos_sign, cos_log},
                                       intsign::from_count(neg_c), tol, static_cast<double>(f_all), t0));
    Verdict par = detail::parity_check("wrapped_sum_parity", p, a, intsign::from_count(wrapped), branch_sign, t0);
    par.params["count"] = wrapped;
    out.push_back(par);
    return out;
}

struct FormTriple {
    i64 a = 0, b = 0, c = 0;
};

/// sin and cos products of pi (a j^2 + b j k + c k^2)/p over 1 <= j < k <= p-1.
inline VerdictList verify_binary_form_products(const TrigContext& ctx, FormTriple f, double tol = kDefaultTolerance) {
    const u64 p = ctx.p;
    if (!arith::is_odd_prime(p)) throw std::invalid_argument("verify_binary_form_products: p must be an odd prime");
    const i64 s3 = f.a + f.b + f.c;
    if (arith::mod(f.a, p) == 0 || arith::mod(f.c, p) == 0 || arith::mod(s3, p) == 0)
        throw std::invalid_argument("verify_binary_form_products: need p not dividing a c (a+b+c)");
    auto t0 = std::chrono::steady_clock::now();
    const i64 delta = f.b * f.b - 4 * f.a * f.c;
    const int lD = arith::legendre(delta, p), la = arith::legendre(f.a, p), lc = arith::legendre(f.c, p), ls = arith::legendre(s3, p);
    const u64 m = 2 * p;
    const u64 A = arith::mod(f.a, m), B = arith::mod(f.b, m), C = arith::mod(f.c, m);
    TrigProduct sp(p), cp(p);
    u64 neg_s = 0, neg_c = 0, f_sin = 0, f_all = 0;
    i64 msum = 0;
    for (u64 j = 1; j < p; ++j) {
        // Q(j, k) mod 2p, stepped in k by (b j + c (2k + 1)).
        u64 r = (A * (j * j % m) + B * j % m * (j + 1) + C * ((j + 1) * (j + 1) % m)) % m;
        u64 step = (B * j + C * (2 * (j + 1) + 1)) % m;
        const u64 step_inc = 2 * C % m;
        for (u64 k = j + 1; k < p; ++k) {
            ++f_all;
            cp.mul_cos_reduced(r);
            neg_c += (p < 2 * r && 2 * r < 3 * p);
            if (r == 0 || r == p) {
                const i64 jj = static_cast<i64>(j), kk = static_cast<i64>(k);
                msum += f.a * jj * jj + f.b * jj * kk + f.c * kk * kk;
            } else {
                ++f_sin;
                sp.mul_sin_reduced(r);
                neg_s += r > p;
            }
            r += step;
            if (r >= m) r -= m;
            step += step_inc;
            if (step >= m) step -= m;
        }
    }
    const i64 h = static_cast<i64>(ctx.h);
    const i64 E = (1 - static_cast<i64>(p) + static_cast<i64>(p) * lD * lD) * la + lc + ls;
    const double base = static_cast<double>(static_cast<i64>(p) - 3 - lD) / 2.0 * detail::log_base(p);
    const int m_sign = detail::psign(msum);

    VerdictList out;
    json extra;
    extra["b"] = f.b;
    extra["c"] = f.c;
    extra["delta_symbol"] = lD;
    extra["m_parity"] = msum % 2 == 0 ? 0 : 1;
    extra["m"] = msum;
    auto tag = [&](Verdict v) {
        for (auto it = extra.begin(); it != extra.end(); ++it) v.params[it.key()] = it.value();
        return v;
    };
    if (p > 3) {
        SignedLog s = sp.result(ctx.table);
        const SignedLog lhs{m_sign * s.sign, s.log_mag + base};
        SignedLog rhs;
        if (p % 4 == 1)
            rhs = {detail::psign((f.b + lD) * static_cast<i64>((p - 1) / 4)), static_cast<double>(static_cast<long double>(h * E) * ctx.log_eps)};
        else if (lD == 0)
            rhs = {detail::psign(f.a + f.b * static_cast<i64>((p - 3) / 4)) * la * ls, 0.0};
        else
            rhs = {detail::psign(f.a + (f.b - 1) * static_cast<i64>((p - 3) / 4) + (h + 1) / 2) * la * lc * ls * lD, 0.0};
        out.push_back(tag(detail::signed_check("form_sine_product", p, f.a, lhs, rhs, m_sign * intsign::from_count(neg_s), tol, static_cast<double>(f_sin), t0)));
    }
    SignedLog c = cp.result(ctx.table);
    const double cos_pow = static_cast<double>(static_cast<i64>(p) - 1) * static_cast<double>(static_cast<i64>(p) - 3 - lD) / 2.0 * std::numbers::ln2;
    const SignedLog lhs{c.sign, c.log_mag + cos_pow};
    SignedLog rhs;
    if (p % 4 == 1)
        rhs = {detail::psign(f.b * static_cast<i64>((p - 1) / 4)), static_cast<double>(static_cast<long double>(h * (ctx.legendre_2 - 1) * E) * ctx.log_eps)};
    else
        rhs = {detail::psign(f.a + f.b * static_cast<i64>((p - 3) / 4) + lD * static_cast<i64>((p + 1) / 4)), 0.0};
    out.push_back(tag(detail::signed_check("form_cosine_product", p, f.a, lhs, rhs, intsign::from_count(neg_c), tol, static_cast<double>(f_all), t0)));
    return out;
}

/// prod (1 - zeta^(a k^2)) as a PolarLog: 1 - zeta^y = 2 sin(pi y/p) e^(i pi (2y - p)/(2p)).
inline PolarLog quadratic_cyclotomic_polar(const TrigContext& ctx, i64 a) {
    const u64 p = ctx.p;
    const u64 ar = arith::mod(a, p);
    TrigProduct mag(p);
    PolarLog out(p);
    for (u64 k = 1; k <= ctx.n; ++k) {
        const u64 y = arith::mulmod(ar, k * k % p, p);
        mag.mul_sin_reduced(y);
        out.add_phase(2 * static_cast<i64>(y) - static_cast<i64>(p));
    }
    mag.mul_pow2(static_cast<i64>(ctx.n));
    out.log_mag = mag.result(ctx.table).log_mag;
    return out;
}

/// Numeric shadow of the exact cyclotomic product identity, valid for all p > 3.
inline Verdict verify_cyclotomic_product_numeric(const TrigContext& ctx, i64 a, double tol = kDefaultTolerance) {
    const u64 p = ctx.p;
    detail::require(p, a);
    if (p <= 3) throw std::invalid_argument("verify_cyclotomic_product_numeric: need p > 3");
    auto t0 = std::chrono::steady_clock::now();
    const int la = arith::legendre(a, p);
    const PolarLog z = quadratic_cyclotomic_polar(ctx, a);
    const i64 h = static_cast<i64>(ctx.h);
    i64 want_phase;
    double want_log = 0.5 * std::log(static_cast<double>(p));
    if (p % 4 == 1) {
        want_phase = 0;
        want_log -= static_cast<double>(static_cast<long double>(la * h) * ctx.log_eps);
    } else {
        // +-i: phase p or 3p in units of pi/(2p)
        want_phase = detail::psign((h + 1) / 2) * la > 0 ? static_cast<i64>(p) : static_cast<i64>(3 * p);
    }
    Verdict v = detail::make_verdict("cyclotomic_product_numeric", p, a, t0);
    v.lhs = z.to_string();
    PolarLog w(p);
    w.phase = want_phase;
    w.log_mag = want_log;
    v.rhs = w.to_string();
    v.pass = z.phase == want_phase && log_close(z.log_mag, want_log, tol, static_cast<double>(ctx.n));
    return v;
}

}  // namespace qrbench::trig
