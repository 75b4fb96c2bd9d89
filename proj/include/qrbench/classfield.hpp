#pragma once

// Class numbers of Q(sqrt(-p)) and Q(sqrt(p)), fundamental units, and the
// factorial congruence that ties h(-p) to ((p-1)/2)! mod p.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "qrbench/arith.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::classfield {

using arith::i64;
using arith::u64;

/// (u + v sqrt(p)) / denom with u, v > 0 and u^2 - p v^2 = norm * denom^2.
struct QuadUnit {
    mpz_class u;
    mpz_class v;
    int denom = 1;
    int norm = 1;
};

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// h(-p) = -(1/p) sum_{k<p} k (k/p); h(-3) is taken as 1.
inline u64 class_number_imag(u64 p) {
    if (!arith::is_odd_prime(p) || p % 4 != 3) throw std::invalid_argument("class_number_imag: need a prime p == 3 mod 4");
    if (p == 3) return 1;
    const arith::PrimeCtx ctx(p);
    i64 sum = 0;
    for (u64 k = 1; k < p; ++k) sum += static_cast<i64>(k) * ctx.legendre(static_cast<i64>(k));
    if (sum % static_cast<i64>(p) != 0) throw std::logic_error("class_number_imag: weighted symbol sum not divisible by p");
    const i64 h = -sum / static_cast<i64>(p);
    if (h <= 0) throw std::logic_error("class_number_imag: non-positive class number");
    return static_cast<u64>(h);
}

/// Number of reduced positive definite forms (A, B, C) with B^2 - 4AC = -p.
inline u64 class_number_imag_by_forms(u64 p) {
    if (p % 4 != 3) throw std::invalid_argument("class_number_imag_by_forms: need p == 3 mod 4");
    const i64 ip = static_cast<i64>(p);
    u64 count = 0;
    for (i64 A = 1; 3 * A * A <= ip; ++A) {
        for (i64 B = -A; B <= A; ++B) {
            if ((B & 1) == 0) continue;
            const i64 num = B * B + ip;
            if (num % (4 * A) != 0) continue;
            const i64 C = num / (4 * A);
            if (C < A) continue;
            if (B < 0 && (-B == A || A == C)) continue;
            ++count;
        }
    }
    return count;
}

/// Fundamental unit of Q(sqrt(p)), p == 1 mod 4, from the continued fraction of
/// omega = (1 + sqrt(p)) / 2: the first convergent h/k with
/// N(h - k omega) = +-1 gives the unit (2h - k + k sqrt(p)) / 2.
inline QuadUnit fundamental_unit(u64 p) {
    if (!arith::is_odd_prime(p) || p % 4 != 1) throw std::invalid_argument("fundamental_unit: need a prime p == 1 mod 4");
    const i64 s = static_cast<i64>(isqrt(p));
    const i64 ip = static_cast<i64>(p);
    const mpz_class quarter = static_cast<unsigned long>((p - 1) / 4);
    i64 P = 1, Q = 2;
    mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    for (;;) {
        const i64 a = (P + s) / Q;
        mpz_class h = a * h_prev + h_prev2;
        mpz_class k = a * k_prev + k_prev2;
        const mpz_class n = h * h - h * k - quarter * k * k;
        if (n == 1 || n == -1) {
            QuadUnit e;
            e.u = 2 * h - k;
            e.v = k;
            e.denom = 2;
            e.norm = n == 1 ? 1 : -1;
            if (mpz_even_p(e.u.get_mpz_t()) && mpz_even_p(e.v.get_mpz_t())) {
                e.u /= 2;
                e.v /= 2;
                e.denom = 1;
            }
            return e;
        }
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        P = a * Q - P;
        Q = (ip - P * P) / Q;
    }
}

/// u^2 - p v^2 == norm * denom^2, exactly.
inline bool unit_norm_holds(const QuadUnit& e, u64 p) {
    const mpz_class lhs = e.u * e.u - mpz_class(static_cast<unsigned long>(p)) * e.v * e.v;
    return lhs == e.norm * e.denom * e.denom;
}

namespace detail {

inline long double log_mpz(const mpz_class& x) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::numbers::ln2_v<long double>;
}

}  // namespace detail

/// Natural log of the unit, from a mantissa/exponent split of the big integers.
inline long double log_unit(const QuadUnit& e, u64 p) {
    long eu = 0, ev = 0;
    const double mu = mpz_get_d_2exp(&eu, e.u.get_mpz_t());
    const double mv = mpz_get_d_2exp(&ev, e.v.get_mpz_t());
    // log(u + v sqrt p) = log u + log1p(v sqrt(p) / u)
    const long double ratio = std::ldexp(static_cast<long double>(mv) / mu, static_cast<int>(ev - eu)) *
                              std::sqrt(static_cast<long double>(p));
    return detail::log_mpz(e.u) + std::log1p(ratio) - std::log(static_cast<long double>(e.denom));
}

/// -sum_{n<p} (n/p) log(2 sin(pi n / p)) / (2 log eps), before rounding.
inline long double class_number_real_raw(u64 p, long double log_eps) {
    const arith::PrimeCtx ctx(p);
    long double sum = 0.0L, comp = 0.0L;
    for (u64 n = 1; n <= (p - 1) / 2; ++n) {
        const long double term = ctx.legendre(static_cast<i64>(n)) *
                                 std::log(2.0L * std::sin(std::numbers::pi_v<long double> * static_cast<long double>(n) / static_cast<long double>(p)));
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // (n/p) = (-n/p) for p == 1 mod 4, so the upper half doubles the sum.
    return -(2.0L * sum) / (2.0L * log_eps);
}

inline u64 class_number_real_analytic(u64 p, const QuadUnit& e) {
    const long double raw = class_number_real_raw(p, log_unit(e, p));
    const long double r = std::nearbyint(raw);
    if (std::fabs(raw - r) > 1e-6L || r < 1) throw std::runtime_error("class_number_real_analytic: value " + std::to_string(static_cast<double>(raw)) + " is not near a positive integer");
    return static_cast<u64>(r);
}

/// Number of cycles of reduced indefinite forms (a, b, c) with b^2 - 4ac = p.
inline u64 class_number_real_by_cycles(u64 p) {
    if (p % 4 != 1) throw std::invalid_argument("class_number_real_by_cycles: need p == 1 mod 4");
    using Form = std::tuple<i64, i64, i64>;
    const i64 D = static_cast<i64>(p);
    const i64 s = static_cast<i64>(isqrt(p));
    std::set<Form> reduced;
    for (i64 b = 1; b <= s; b += 2) {
        const i64 ac = (b * b - D) / 4;
        const i64 n = -ac;
        for (i64 d = 1; d <= n; ++d) {
            if (n % d) continue;
            for (const i64 a : {d, -d}) {
                const i64 c = ac / a;
                const i64 x = 2 * (a < 0 ? -a : a);
                // sqrt(D) - b < 2|a| < sqrt(D) + b
                if ((x + b) * (x + b) > D && (x - b < 0 || (x - b) * (x - b) < D)) reduced.emplace(a, b, c);
            }
        }
    }
    auto rho = [&](const Form& f) {
        const auto [a, b, c] = f;
        (void)a;
        const i64 m = 2 * (c < 0 ? -c : c);
        const i64 r = s - (((s + b) % m) + m) % m;
        return Form{c, r, (r * r - D) / (4 * c)};
    };
    std::set<Form> seen;
    u64 cycles = 0;
    for (const Form& f : reduced) {
        if (seen.count(f)) continue;
        ++cycles;
        Form g = f;
        while (!seen.count(g)) {
            if (!reduced.count(g)) throw std::logic_error("class_number_real_by_cycles: reduction left the reduced set");
            seen.insert(g);
            g = rho(g);
        }
    }
    return cycles;
}

/// h(p) by the analytic route, cross-checked against the cycle count.
inline u64 class_number_real(u64 p, const QuadUnit& e) {
    const u64 analytic = class_number_real_analytic(p, e);
    const u64 cycles = class_number_real_by_cycles(p);
    if (analytic != cycles)
        throw std::runtime_error("class_number_real: analytic " + std::to_string(analytic) + " != cycle count " + std::to_string(cycles) + " at p=" + std::to_string(p));
    return analytic;
}

/// ((p-1)/2)! == (-1)^((h(-p)+1)/2) (mod p) for p == 3 mod 4, p > 3.
inline Verdict mordell_check(u64 p, std::optional<u64> h_minus = std::nullopt) {
    if (!arith::is_odd_prime(p) || p % 4 != 3 || p <= 3) throw std::invalid_argument("mordell_check: need a prime p == 3 mod 4, p > 3");
    const auto t0 = std::chrono::steady_clock::now();
    const u64 h = h_minus ? *h_minus : class_number_imag(p);
    const arith::PrimeCtx ctx(p);
    const u64 lhs = ctx.half_factorial();
    const u64 rhs = arith::sign_residue(arith::parity_sign(static_cast<i64>((h + 1) / 2)), p);
    Verdict v;
    v.check = "factorial_class_number";
    v.params["h_minus"] = h;
    v.lhs = std::to_string(lhs);
    v.rhs = std::to_string(rhs);
    v.param = static_cast<i64>(p);
    v.pass = lhs == rhs && h % 2 == 1;
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

struct ClassData {
    u64 p = 0;
    std::optional<u64> h_minus;
    std::optional<u64> h_plus;
    std::optional<QuadUnit> unit;
    long double log_eps = 0.0L;
};

inline ClassData compute_class_data(u64 p) {
    ClassData d;
    d.p = p;
    if (p % 4 == 3) {
        d.h_minus = class_number_imag(p);
    } else {
        d.unit = fundamental_unit(p);
        d.log_eps = log_unit(*d.unit, p);
        d.h_plus = class_number_real(p, *d.unit);
    }
    return d;
}

inline json class_data_to_json(const ClassData& d) {
    json j;
    j["p"] = std::to_string(d.p);
    if (d.h_minus) j["h_minus"] = std::to_string(*d.h_minus);
    if (d.h_plus) j["h_plus"] = std::to_string(*d.h_plus);
    if (d.unit) {
        j["u"] = d.unit->u.get_str();
        j["v"] = d.unit->v.get_str();
        j["denom"] = std::to_string(d.unit->denom);
        j["norm"] = std::to_string(d.unit->norm);
    }
    return j;
}

inline ClassData class_data_from_json(const json& j) {
    ClassData d;
    d.p = std::stoull(j.at("p").get<std::string>());
    if (j.contains("h_minus")) d.h_minus = std::stoull(j.at("h_minus").get<std::string>());
    if (j.contains("h_plus")) d.h_plus = std::stoull(j.at("h_plus").get<std::string>());
    if (j.contains("u")) {
        QuadUnit e;
        e.u = mpz_class(j.at("u").get<std::string>());
        e.v = mpz_class(j.at("v").get<std::string>());
        e.denom = std::stoi(j.at("denom").get<std::string>());
        e.norm = std::stoi(j.at("norm").get<std::string>());
        if (!unit_norm_holds(e, d.p)) throw std::runtime_error("class data cache: unit norm mismatch at p=" + std::to_string(d.p));
        d.unit = e;
        d.log_eps = log_unit(e, d.p);
    }
    return d;
}

/// Process-wide memo of ClassData keyed by p; thread safe.
class ClassCache {
public:
    static ClassCache& instance() {
        static ClassCache cache;
        return cache;
    }

    ClassData get(u64 p) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(p);
            if (it != memo_.end()) return it->second;
        }
        ClassData d = compute_class_data(p);
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(p, std::move(d)).first->second;
    }

    /// Loads records from a JSONL file; returns how many were read.
    std::size_t load(const std::string& path) {
        std::ifstream in(path);
        if (!in) return 0;
        std::size_t n = 0;
        std::string line;
        std::lock_guard<std::mutex> lock(mu_);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ClassData d = class_data_from_json(json::parse(line));
            memo_[d.p] = std::move(d);
            ++n;
        }
        return n;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write class data cache " + path);
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto& [p, d] : memo_) out << class_data_to_json(d).dump() << '\n';
    }

private:
    mutable std::mutex mu_;
    std::map<u64, ClassData> memo_;
};

inline ClassData class_data(u64 p) { return ClassCache::instance().get(p); }

}  // namespace qrbench::classfield
