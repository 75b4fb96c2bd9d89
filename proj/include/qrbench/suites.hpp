#pragma once

// Named verification suites: which parameters each suite visits and which
// checks it runs at one parameter.

#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrbench/arith.hpp"
#include "qrbench/classfield.hpp"
#include "qrbench/congr.hpp"
#include "qrbench/conjectures.hpp"
#include "qrbench/cyclo.hpp"
#include "qrbench/perms.hpp"
#include "qrbench/trigeval.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::suites {

using arith::i64;
using arith::u64;

/// Exact ring checks above these primes are left to the numeric suite.
inline constexpr u64 kExactProductCap = 199;
inline constexpr u64 kExactPairProductCap = 61;
/// Multiplication-permutation signs are O(m^2 log m) per modulus.
inline constexpr u64 kSymbolSignCap = 499;

struct SuiteConfig {
    std::string suite;
    std::optional<i64> a;
    std::optional<congr::Grid> grid;
    double tolerance = trig::kDefaultTolerance;

    bool is_conjecture() const { return suite.rfind("conj:", 0) == 0; }
    std::string conjecture_id() const { return suite.substr(5); }
};

struct TaskResult {
    VerdictList verdicts;
    std::map<std::string, u64> skipped; // reason -> count
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"thm11", "thm12", "thm13_exact", "thm13_numeric", "thm14",
                                                   "thm15", "thm16", "lemmas",      "mordell"};
    return names;
}

inline bool known_suite(const std::string& s) {
    for (const auto& n : suite_names())
        if (n == s) return true;
    if (s.rfind("conj:", 0) == 0) {
        for (const auto& id : conj::conjecture_ids())
            if (s.substr(5) == id) return true;
    }
    return false;
}

/// Grid used when the caller gives none.
inline congr::Grid default_grid(const std::string& suite) {
    return suite == "thm16" ? congr::Grid{-2, 2} : congr::Grid{-3, 3};
}

/// Whether the suite visits parameter x at all.
inline bool qualifies(const SuiteConfig& cfg, u64 x) {
    if (cfg.is_conjecture()) return conj::applies(cfg.conjecture_id(), x);
    if (cfg.suite == "thm11" || cfg.suite == "lemmas") return x >= 3 && x % 2 == 1;
    if (!arith::is_odd_prime(x)) return false;
    if (cfg.suite == "thm13_exact" || cfg.suite == "thm13_numeric") return x >= 5;
    return true;
}

/// The parameters of [lo, hi] the suite visits, ascending.
inline std::vector<u64> parameters(const SuiteConfig& cfg, u64 lo, u64 hi) {
    std::vector<u64> out;
    const bool primes_only = !(cfg.suite == "thm11" || cfg.suite == "lemmas" || cfg.suite == "conj:6.8");
    if (primes_only) {
        if (hi < 2 || lo > hi) return out;
        for (const u64 p : arith::sieve_primes(std::max<u64>(lo, 2), hi))
            if (qualifies(cfg, p)) out.push_back(p);
        return out;
    }
    for (u64 x = lo; x <= hi; ++x)
        if (qualifies(cfg, x)) out.push_back(x);
    return out;
}

namespace detail {

inline void append(VerdictList& out, VerdictList more) {
    for (auto& v : more) out.push_back(std::move(v));
}

/// The multipliers a to use at p: the configured one, or 1 and the least non-residue.
inline std::vector<i64> multipliers(const SuiteConfig& cfg, u64 p, TaskResult& r) {
    if (cfg.a) {
        if (arith::mod(*cfg.a, p) == 0) {
            ++r.skipped["p divides a"];
            return {};
        }
        return {*cfg.a};
    }
    return {1, static_cast<i64>(arith::PrimeCtx(p).smallest_nonresidue())};
}

inline Verdict symbol_signs(u64 m) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.check = "multiplication_perm_signs";
    v.param_name = "m";
    v.param = static_cast<i64>(m);
    const bool prime = arith::is_prime(m);
    u64 cases = 0;
    v.pass = true;
    for (u64 a = 1; a < m && v.pass; ++a) {
        if (arith::gcd(static_cast<i64>(a), static_cast<i64>(m)) != 1) continue;
        const i64 ia = static_cast<i64>(a);
        const int jac = arith::jacobi(ia, static_cast<i64>(m));
        const int full = perms::zolotarev_sign(ia, m, perms::MultiplicationVariant::full_residues);
        const int pan = perms::pan_sign(ia, m);
        int unit = jac;
        if (prime) unit = perms::zolotarev_sign(ia, m, perms::MultiplicationVariant::prime_units);
        ++cases;
        if (full != jac || pan != perms::pan_sign_closed_form(ia, m) || unit != jac) {
            v.pass = false;
            v.params["first_mismatch"] = a;
            v.lhs = "full=" + std::to_string(full) + ",folded=" + std::to_string(pan) + ",units=" + std::to_string(unit);
            v.rhs = "symbol=" + std::to_string(jac) + ",folded=" + std::to_string(perms::pan_sign_closed_form(ia, m));
        }
    }
    v.params["cases"] = cases;
    if (v.pass) v.lhs = v.rhs = "all " + std::to_string(cases) + " multipliers agree";
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

/// sign(S_p), (-1)^s(p), (-1)^t(p) and the class-number closed form for p = 3 mod 4.
inline Verdict square_list_sign(u64 p) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto st = perms::sp_stats(p);
    const u64 h = classfield::class_number_imag(p);
    const u64 h_forms = classfield::class_number_imag_by_forms(p);
    const int closed = p % 8 == 3 ? 1 : arith::parity_sign(static_cast<i64>((h + 1) / 2));
    const int st_sign = st.t % 2 == 0 ? 1 : -1;
    Verdict v;
    v.check = "square_list_sign";
    v.param = static_cast<i64>(p);
    v.params["s"] = st.s;
    v.params["t"] = st.t;
    v.params["h"] = h;
    v.params["h_forms"] = h_forms;
    v.lhs = "s=" + std::to_string(st.sign) + ",t=" + std::to_string(st_sign);
    v.rhs = std::to_string(closed);
    v.pass = st.sign == closed && st_sign == closed && h == h_forms;
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

/// Numeric value of prod (1 - zeta^(a k^2)) against the exact ring product.
inline Verdict numeric_exact_agreement(const trig::TrigContext& ctx, i64 a, double tol) {
    const auto t0 = std::chrono::steady_clock::now();
    const u64 p = ctx.p;
    std::vector<cyclo::CycloFactor> fs;
    for (u64 k = 1; k <= ctx.n; ++k) fs.push_back(cyclo::CycloFactor::one_minus(a * static_cast<i64>(k * k)));
    const auto exact = cyclo::cyclo_product(fs, p).evaluate();
    const PolarLog z = trig::quadratic_cyclotomic_polar(ctx, a);
    const long double theta = std::numbers::pi_v<long double> * static_cast<long double>(z.phase) / static_cast<long double>(2 * p);
    const std::complex<long double> numeric = std::polar(std::exp(static_cast<long double>(z.log_mag)), theta);
    Verdict v;
    v.check = "numeric_exact_agreement";
    v.param = static_cast<i64>(p);
    v.params["a"] = a;
    const long double err = std::abs(numeric - exact) / std::max(1.0L, std::abs(exact));
    v.params["relative_error"] = static_cast<double>(err);
    v.lhs = z.to_string();
    v.rhs = cyclo::detail::shadow(cyclo::cyclo_product(fs, p));
    v.pass = err <= tol * std::sqrt(static_cast<long double>(ctx.n)) * 10.0L;
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

inline Verdict class_number_forms_agree(u64 p) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.check = "class_number_forms_agree";
    v.param = static_cast<i64>(p);
    const u64 h = classfield::class_number_imag(p), f = classfield::class_number_imag_by_forms(p);
    v.lhs = std::to_string(h);
    v.rhs = std::to_string(f);
    v.pass = h == f && (p == 3 || h % 2 == 1);
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

inline Verdict unit_norm_power(u64 p) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cd = classfield::class_data(p);
    Verdict v;
    v.check = "unit_norm_power";
    v.param = static_cast<i64>(p);
    const int norm = cd.unit->norm;
    const int lhs = (*cd.h_plus % 2 == 0) ? 1 : norm;
    v.params["h"] = *cd.h_plus;
    v.params["norm"] = norm;
    v.params["h_cycles"] = classfield::class_number_real_by_cycles(p);
    v.lhs = std::to_string(lhs);
    v.rhs = "-1";
    v.pass = lhs == -1 && classfield::unit_norm_holds(*cd.unit, p) && v.params["h_cycles"].get<u64>() == *cd.h_plus;
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

}  // namespace detail

/// Every check the suite runs at parameter x.
inline TaskResult run_task(const SuiteConfig& cfg, u64 x) {
    TaskResult r;
    auto& out = r.verdicts;
    const double tol = cfg.tolerance;
    const congr::Grid grid = cfg.grid.value_or(default_grid(cfg.suite));

    if (cfg.is_conjecture()) {
        const std::string id = cfg.conjecture_id();
        out = conj::scan(id, x, cfg.a.value_or(1));
        if (id == "6.5") {
            for (const u64 m : {2u, 3u}) out.push_back(conj::report_power_ratio(x, m));
        }
        return r;
    }
    const std::string& s = cfg.suite;
    if (s == "thm11") {
        out.push_back(perms::verify_inverse_perm_signs(x));
        if (x <= kSymbolSignCap) out.push_back(detail::symbol_signs(x));
        return r;
    }
    if (s == "lemmas") {
        out.push_back(congr::verify_inverse_pair_counts(x));
        if (arith::is_odd_prime(x)) detail::append(out, congr::verify_support_lemmas(x, grid));
        return r;
    }
    const u64 p = x;
    if (s == "thm12") {
        auto run = congr::verify_form_products_on_grid(p, grid);
        out = std::move(run.verdicts);
        for (const auto& [why, n] : run.excluded) r.skipped[why] += n;
        detail::append(out, congr::verify_square_products(p));
        return r;
    }
    if (s == "mordell") {
        if (p % 4 == 3) {
            out.push_back(detail::class_number_forms_agree(p));
            if (p > 3)
                out.push_back(classfield::mordell_check(p));
            else
                ++r.skipped["factorial congruence asserted only for p > 3"];
        } else {
            out.push_back(detail::unit_norm_power(p));
        }
        return r;
    }

    const auto cd = classfield::class_data(p);
    const trig::TrigContext ctx(p, cd);
    const auto avals = detail::multipliers(cfg, p, r);

    if (s == "thm13_exact") {
        for (const i64 a : avals) {
            out.push_back(cyclo::verify_gauss_sum(p, a));
            if (p <= kExactProductCap)
                out.push_back(cyclo::verify_quadratic_cyclotomic_product(p, a, cd));
            else
                ++r.skipped["exact half product above cap"];
            if (p <= kExactPairProductCap)
                out.push_back(cyclo::verify_square_vandermonde_product(p, a, cd));
            else
                ++r.skipped["exact pair product above cap"];
        }
        if (p % 4 == 1) {
            if (p <= kExactPairProductCap)
                out.push_back(cyclo::verify_class_number_product(p, cd));
            else
                ++r.skipped["exact class number product above cap"];
        }
        return r;
    }
    if (s == "thm13_numeric") {
        for (const i64 a : avals) {
            detail::append(out, trig::verify_half_sine_cosine(ctx, a, tol));
            out.push_back(trig::verify_cyclotomic_product_numeric(ctx, a, tol));
            if (p <= kExactPairProductCap) out.push_back(detail::numeric_exact_agreement(ctx, a, tol));
        }
        return r;
    }
    if (s == "thm14") {
        if (p % 4 == 3)
            out.push_back(detail::square_list_sign(p));
        else
            ++r.skipped["square-list sign has no closed form for p = 1 mod 4"];
        if (p == 3) {
            ++r.skipped["pair products are empty at p = 3"];
            return r;
        }
        for (const i64 a : avals) detail::append(out, trig::verify_csc_cot_products(ctx, a, tol));
        return r;
    }
    if (s == "thm15") {
        if (p == 3) {
            ++r.skipped["pair products are empty at p = 3"];
            return r;
        }
        for (const i64 a : avals) detail::append(out, trig::verify_cos_difference_product(ctx, a, tol));
        return r;
    }
    if (s == "thm16") {
        for (const i64 a : avals) detail::append(out, trig::verify_square_sum_products(ctx, a, tol));
        grid.for_each([&](i64 a, i64 b, i64 c) {
            if (arith::mod(a, p) == 0 || arith::mod(c, p) == 0 || arith::mod(a + b + c, p) == 0) {
                ++r.skipped["form triple with p | ac(a+b+c)"];
                return;
            }
            detail::append(out, trig::verify_binary_form_products(ctx, {a, b, c}, tol));
        });
        return r;
    }
    throw std::invalid_argument("unknown suite " + s);
}

}  // namespace qrbench::suites
