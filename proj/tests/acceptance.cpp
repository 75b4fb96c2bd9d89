// End-to-end acceptance run: one PASS/FAIL line per criterion, exit 1 if any
// criterion fails. Counterexamples found by the conjecture scans are written
// to an artifact file and reported, not hidden.

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "qrbench/qrbench.hpp"

namespace {

using namespace qrbench;
using arith::i64;
using arith::u64;

struct Outcome {
    bool pass = false;
    std::string detail;
};

/// Applies f to every parameter on a pool of jobs threads, keeping order.
template <class R>
std::vector<R> parallel_map(const std::vector<u64>& xs, unsigned jobs, const std::function<R(u64)>& f) {
    std::vector<R> out(xs.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](unsigned t) {
        try {
            for (std::size_t i; (i = next++) < xs.size();) out[i] = f(xs[i]);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

run::RunReport run_scan(const std::string& suite, u64 lo, u64 hi, unsigned jobs, std::vector<json>* lines = nullptr,
                   std::optional<i64> a = std::nullopt) {
    run::RunRequest req;
    req.config.suite = suite;
    req.config.a = a;
    req.lo = lo;
    req.hi = hi;
    req.jobs = jobs;
    req.timing = false;
    if (!lines) return run::run_suite(req);
    return run::run_suite(req, std::nullopt, [lines](const json& j) { lines->push_back(j); });
}

std::map<std::string, std::pair<u64, u64>> by_check(const std::vector<json>& lines) {
    std::map<std::string, std::pair<u64, u64>> m; // check -> (passes, failures)
    for (const auto& j : lines) {
        auto& slot = m[j.at("params").at("check").get<std::string>()];
        (j.at("pass").get<bool>() ? slot.first : slot.second)++;
    }
    return m;
}

std::string summarize(const run::RunReport& rep) {
    std::ostringstream os;
    os << rep.passes << " pass, " << rep.failures.size() << " fail, " << rep.skipped << " skipped over " << rep.params_done << " params";
    return os.str();
}

std::string first_failure(const run::RunReport& rep) { return rep.failures.empty() ? "" : "; first failure " + rep.failures.front().dump(); }

Outcome inverse_signs(const std::vector<json>& lines) {
    const auto m = by_check(lines);
    const auto it = m.find("inverse_perm_signs");
    const u64 want = (9999 - 3) / 2 + 1;
    const bool ok = it != m.end() && it->second.first == want && it->second.second == 0;
    return {ok, "inverse-map signs for " + std::to_string(it == m.end() ? 0 : it->second.first) + "/" + std::to_string(want) + " odd m <= 9999"};
}

Outcome symbol_signs(const std::vector<json>& lines) {
    const auto m = by_check(lines);
    const auto it = m.find("multiplication_perm_signs");
    const u64 want = (499 - 3) / 2 + 1;
    u64 cases = 0;
    for (const auto& j : lines)
        if (j.at("params").at("check") == "multiplication_perm_signs") cases += j.at("params").at("cases").get<u64>();
    const bool ok = it != m.end() && it->second.first == want && it->second.second == 0;
    return {ok, "multiplication and folded signs for " + std::to_string(it == m.end() ? 0 : it->second.first) + "/" + std::to_string(want) +
                    " odd moduli <= 499 (" + std::to_string(cases) + " multipliers)"};
}

Outcome form_products(unsigned jobs) {
    std::vector<json> lines;
    const auto rep = run_scan("thm12", 3, 199, jobs, &lines);
    const auto m = by_check(lines);
    u64 signs_pos = 0, signs_neg = 0;
    for (const auto& j : lines)
        if (j.contains("observed_sign")) (j.at("observed_sign").get<int>() > 0 ? signs_pos : signs_neg)++;
    const bool ok = rep.failures.empty() && rep.complete && m.count("form_product_generic") && m.count("form_product_root_one") &&
                    m.count("form_product_degenerate") && m.count("form_product_half_square") && m.count("square_sum_product") &&
                    m.count("square_difference_product") && m.count("square_sum_product_nonzero");
    return {ok, summarize(rep) + "; half-square signs observed +" + std::to_string(signs_pos) + "/-" + std::to_string(signs_neg) + first_failure(rep)};
}

Outcome exact_cyclotomic(unsigned jobs) {
    std::vector<json> lines;
    const auto rep = run_scan("thm13_exact", 5, 199, jobs, &lines);
    const auto m = by_check(lines);
    // Two multipliers per prime; pair and class-number products up to 61.
    const u64 primes = arith::sieve_primes(5, 199).size(), small = arith::sieve_primes(5, 61).size();
    const u64 small_one = arith::sieve_primes(5, 61, arith::ResidueFilter{1, 4}).size();
    auto count = [&](const std::string& c) { return m.count(c) ? m.at(c).first : 0; };
    const u64 half = count("quadratic_cyclotomic_product");
    const u64 pair = count("vandermonde_product") + count("square_vandermonde_product");
    const bool ok = rep.failures.empty() && half == 2 * primes && pair == 2 * small && count("class_number_product") == small_one &&
                    count("gauss_sum") == 2 * primes;
    return {ok, summarize(rep) + "; half products " + std::to_string(half) + ", pair products " + std::to_string(pair) + ", class-number products " +
                    std::to_string(count("class_number_product")) + first_failure(rep)};
}

Outcome square_list(unsigned jobs) {
    const auto ps = arith::sieve_primes(3, 9999, arith::ResidueFilter{3, 4});
    const auto vs = parallel_map<Verdict>(ps, jobs, [](u64 p) { return suites::detail::square_list_sign(p); });
    u64 fails = 0;
    std::string first;
    for (const auto& v : vs)
        if (!v.pass && fails++ == 0) first = "; first failure p=" + std::to_string(v.param);
    const auto s11 = perms::sp_stats(11);
    const bool values = s11.s == 4 && s11.t == 4;
    return {fails == 0 && values, std::to_string(vs.size() - fails) + "/" + std::to_string(vs.size()) + " primes 3 mod 4 <= 9999; s(11)=" +
                                      std::to_string(s11.s) + " t(11)=" + std::to_string(s11.t) + first};
}

Outcome numeric_identities(unsigned jobs) {
    bool ok = true;
    std::string detail;
    for (const std::string suite : {"thm13_numeric", "thm14", "thm15", "thm16"}) {
        const auto rep = run_scan(suite, 3, 499, jobs);
        ok = ok && rep.failures.empty() && rep.complete && rep.passes > 0;
        detail += (detail.empty() ? "" : "; ") + suite + " " + std::to_string(rep.passes) + "/" + std::to_string(rep.passes + rep.failures.size()) +
                  first_failure(rep);
    }
    return {ok, detail};
}

Outcome class_numbers(unsigned jobs) {
    const auto small = run_scan("mordell", 3, 2000, jobs);
    const auto ps = arith::sieve_primes(2001, 9999, arith::ResidueFilter{3, 4});
    const auto vs = parallel_map<Verdict>(ps, jobs, [](u64 p) { return classfield::mordell_check(p); });
    u64 fails = 0;
    for (const auto& v : vs) fails += !v.pass;
    const bool ok = small.failures.empty() && small.complete && fails == 0;
    return {ok, "p <= 2000: " + summarize(small) + "; factorial congruence 2000 < p <= 9999: " + std::to_string(vs.size() - fails) + "/" +
                    std::to_string(vs.size()) + first_failure(small)};
}

Outcome conjectures(unsigned jobs, const std::string& artifact_path) {
    std::ofstream artifacts(artifact_path, std::ios::trunc);
    bool ok = true;
    std::string detail;
    for (const auto& id : conj::conjecture_ids()) {
        if (id == "6.8") continue;
        const auto rep = run_scan("conj:" + id, 3, 5000, jobs, nullptr, 1);
        for (const auto& f : rep.failures) artifacts << f.dump() << "\n";
        ok = ok && rep.complete && rep.failures.empty();
        detail += id + ":" + std::to_string(rep.failures.size()) + " ";
    }
    // Every n is examined, without halting, so the full zero pattern is reported.
    std::vector<u64> ns;
    for (u64 n = 3; n <= 99; n += 2) ns.push_back(n);
    const auto det_lists = parallel_map<VerdictList>(ns, jobs, [](u64 n) { return conj::check_6_8(n); });
    u64 agree = 0, total = 0;
    std::vector<std::string> counterexamples;
    for (const auto& list : det_lists)
        for (const auto& v : list) {
            ++total;
            agree += v.params.at("modular_agrees").get<bool>();
            if (!v.pass) {
                artifacts << to_json(v, "conj:6.8", false).dump() << "\n";
                counterexamples.push_back(v.check + "@n=" + std::to_string(v.param) + " det=" + v.params.at("det").get<std::string>());
            }
        }
    // The floor determinant vanishing pattern has exactly one exception below
    // 100, at n = 7 (determinant -2); anything else is a regression.
    const bool known_only = counterexamples.size() == 1 && counterexamples[0] == "floor_square_product_det@n=7 det=-2";
    ok = ok && agree == total && known_only;
    detail += "6.8: pattern checked for " + std::to_string(ns.size()) + " odd n, modular agreement " + std::to_string(agree) + "/" +
              std::to_string(total) + "; counterexamples reported:";
    for (const auto& c : counterexamples) detail += " " + c;
    detail += " (written to " + artifact_path + ")";
    return {ok, detail};
}

Outcome bfile_stability(unsigned jobs) {
    const auto& seq = bfile::find_sequence("s_p");
    const auto primes = bfile::indexed_primes(seq, 3, std::nullopt, 100);
    const std::string a = bfile::render(seq, primes, 1);
    const std::string b = bfile::render(seq, primes, std::max(2u, jobs));
    const std::string c = bfile::render(seq, primes, 1);
    std::string expect;
    for (std::size_t i = 0; i < primes.size(); ++i) expect += std::to_string(i + 1) + " " + std::to_string(oracle::square_list_counts(primes[i]).s) + "\n";
    const bool ok = primes.size() == 100 && primes.back() == 547 && a == b && a == c && a == expect;
    return {ok, std::to_string(a.size()) + " bytes, identical across runs and worker counts, matches pairwise oracle: " + (a == expect ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qrbench acceptance run"};
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string artifact = "acceptance_counterexamples.jsonl";
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--artifacts", artifact, "file receiving conjecture counterexamples");
    CLI11_PARSE(app, argc, argv);

    std::vector<json> thm11_lines;
    bool all = true;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && o.pass;
        std::ostringstream t;
        t.setf(std::ios::fixed);
        t.precision(1);
        t << secs;
        std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << name << " [" << t.str() << " s] " << o.detail << std::endl;
    };

    report(1, "inverse-map signs", [&] {
        run_scan("thm11", 3, 9999, jobs, &thm11_lines);
        return inverse_signs(thm11_lines);
    });
    report(2, "multiplication permutation signs", [&] { return symbol_signs(thm11_lines); });
    report(3, "form product congruences", [&] { return form_products(jobs); });
    report(4, "exact cyclotomic products", [&] { return exact_cyclotomic(jobs); });
    report(5, "square-list sign", [&] { return square_list(jobs); });
    report(6, "numeric trigonometric identities", [&] { return numeric_identities(jobs); });
    report(7, "class-number plumbing", [&] { return class_numbers(jobs); });
    report(8, "conjecture scans", [&] { return conjectures(jobs, artifact); });
    report(9, "b-file stability", [&] { return bfile_stability(jobs); });
    return all ? 0 : 1;
}
