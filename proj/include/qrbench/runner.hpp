#pragma once

// Range scans over a worker pool. Results are emitted strictly in parameter
// order, so reports do not depend on the worker count; a checkpoint records
// how far the ordered output got and how many bytes of it were committed.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qrbench/suites.hpp"
#include "qrbench/verdict.hpp"

namespace qrbench::run {

using arith::i64;
using arith::u64;

inline constexpr u64 kCheckpointEvery = 64;

struct RunRequest {
    suites::SuiteConfig config;
    u64 lo = 3;
    u64 hi = 3;
    unsigned jobs = 1;
    bool timing = true;
    std::string out_path;        // JSONL results; empty for none
    std::string checkpoint_path; // empty for none
    std::optional<u64> max_params; // stop after this many emitted parameters
};

struct RunReport {
    std::string suite;
    u64 lo = 0, hi = 0;
    u64 params_total = 0;
    u64 params_done = 0;
    u64 passes = 0;
    std::vector<json> failures;
    u64 skipped = 0;
    std::map<std::string, u64> skipped_reasons;
    std::set<std::string> halted_checks; // conjecture checks stopped by a counterexample
    double wall_seconds = 0.0;
    bool complete = false;

    u64 attempted() const { return passes + failures.size() + skipped; }
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline json grid_json(const std::optional<congr::Grid>& g) {
    if (!g) return nullptr;
    return json{{"lo", g->lo}, {"hi", g->hi}};
}

inline json checkpoint_json(const RunRequest& req, const RunReport& rep, u64 next_index, std::optional<u64> last_param,
                            std::uint64_t out_bytes) {
    json j;
    j["suite"] = req.config.suite;
    j["from"] = req.lo;
    j["to"] = req.hi;
    j["a"] = req.config.a ? json(*req.config.a) : json(nullptr);
    j["grid"] = grid_json(req.config.grid);
    j["tolerance"] = req.config.tolerance;
    j["timing"] = req.timing;
    j["out"] = req.out_path;
    j["next_index"] = next_index;
    j["last_completed_param"] = last_param ? json(*last_param) : json(nullptr);
    j["out_bytes"] = out_bytes;
    j["passes"] = rep.passes;
    j["failures"] = rep.failures;
    j["skipped"] = rep.skipped;
    j["skipped_reasons"] = rep.skipped_reasons;
    j["halted_checks"] = rep.halted_checks;
    j["complete"] = rep.complete;
    return j;
}

inline void write_atomically(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::ios_base::failure("cannot write " + tmp);
        f << text;
        if (!f) throw std::ios_base::failure("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

struct ResumeState {
    RunRequest request;
    RunReport report;
    u64 next_index = 0;
    std::uint64_t out_bytes = 0;
};

/// Parses a checkpoint file; throws CheckpointError on anything malformed.
inline ResumeState load_checkpoint(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CheckpointError("cannot open checkpoint " + path);
    ResumeState st;
    try {
        const json j = json::parse(f);
        auto& req = st.request;
        req.config.suite = j.at("suite").get<std::string>();
        if (!suites::known_suite(req.config.suite)) throw CheckpointError("checkpoint names unknown suite " + req.config.suite);
        req.lo = j.at("from").get<u64>();
        req.hi = j.at("to").get<u64>();
        if (!j.at("a").is_null()) req.config.a = j.at("a").get<i64>();
        if (!j.at("grid").is_null()) req.config.grid = congr::Grid{j.at("grid").at("lo").get<i64>(), j.at("grid").at("hi").get<i64>()};
        req.config.tolerance = j.at("tolerance").get<double>();
        req.timing = j.at("timing").get<bool>();
        req.out_path = j.at("out").get<std::string>();
        req.checkpoint_path = path;
        st.next_index = j.at("next_index").get<u64>();
        st.out_bytes = j.at("out_bytes").get<std::uint64_t>();
        auto& rep = st.report;
        rep.suite = req.config.suite;
        rep.lo = req.lo;
        rep.hi = req.hi;
        rep.passes = j.at("passes").get<u64>();
        rep.failures = j.at("failures").get<std::vector<json>>();
        rep.skipped = j.at("skipped").get<u64>();
        rep.skipped_reasons = j.at("skipped_reasons").get<std::map<std::string, u64>>();
        rep.halted_checks = j.at("halted_checks").get<std::set<std::string>>();
        rep.complete = j.at("complete").get<bool>();
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
    return st;
}

/// Runs (or continues) a scan. Verdict lines go to the results file in
/// parameter order; the returned report covers the whole scan so far.
inline RunReport run_suite(const RunRequest& req, std::optional<ResumeState> resume = std::nullopt,
                           const std::function<void(const json&)>& on_line = {}) {
    if (!suites::known_suite(req.config.suite)) throw std::invalid_argument("unknown suite " + req.config.suite);
    if (req.lo > req.hi) throw std::invalid_argument("empty range: from > to");
    if (req.jobs == 0) throw std::invalid_argument("jobs must be >= 1");
    const auto wall0 = std::chrono::steady_clock::now();

    const std::vector<u64> params = suites::parameters(req.config, req.lo, req.hi);
    RunReport rep;
    u64 start = 0;
    std::uint64_t out_bytes = 0;
    if (resume) {
        rep = resume->report;
        start = resume->next_index;
        out_bytes = resume->out_bytes;
        if (start > params.size()) throw CheckpointError("checkpoint index beyond the parameter list");
    }
    rep.suite = req.config.suite;
    rep.lo = req.lo;
    rep.hi = req.hi;
    rep.params_total = params.size();

    std::ofstream out;
    if (!req.out_path.empty()) {
        if (resume) {
            // Lines past the last checkpoint were never committed.
            if (!std::filesystem::exists(req.out_path)) throw CheckpointError("results file missing: " + req.out_path);
            if (std::filesystem::file_size(req.out_path) < out_bytes) throw CheckpointError("results file shorter than checkpoint");
            std::filesystem::resize_file(req.out_path, out_bytes);
            out.open(req.out_path, std::ios::binary | std::ios::app);
        } else {
            out.open(req.out_path, std::ios::binary | std::ios::trunc);
        }
        if (!out) throw std::ios_base::failure("cannot open " + req.out_path);
    }

    const u64 end = req.max_params ? std::min<u64>(params.size(), start + *req.max_params) : params.size();
    std::optional<u64> last_param;
    if (start > 0) last_param = params[start - 1];

    auto checkpoint = [&](u64 next) {
        if (req.checkpoint_path.empty()) return;
        if (out.is_open()) out.flush();
        detail::write_atomically(req.checkpoint_path, detail::checkpoint_json(req, rep, next, last_param, out_bytes).dump(2) + "\n");
    };

    const bool halting = req.config.is_conjecture();
    auto emit = [&](u64 x, suites::TaskResult& r) {
        for (const auto& [why, n] : r.skipped) {
            rep.skipped += n;
            rep.skipped_reasons[why] += n;
        }
        for (const auto& v : r.verdicts) {
            if (halting && rep.halted_checks.count(v.check)) {
                ++rep.skipped;
                ++rep.skipped_reasons["halted after counterexample: " + v.check];
                continue;
            }
            const json line = to_json(v, req.config.suite, req.timing);
            if (v.pass) {
                ++rep.passes;
            } else {
                rep.failures.push_back(line);
                if (halting) rep.halted_checks.insert(v.check);
            }
            const std::string text = line.dump() + "\n";
            if (out.is_open()) {
                out << text;
                if (!out) throw std::ios_base::failure("write failed for " + req.out_path);
                out_bytes += text.size();
            }
            if (on_line) on_line(line);
        }
        last_param = x;
    };

    const u64 count = end - start;
    if (req.jobs == 1 || count <= 1) {
        for (u64 i = start; i < end; ++i) {
            auto r = suites::run_task(req.config, params[i]);
            emit(params[i], r);
            if ((i + 1 - start) % kCheckpointEvery == 0) checkpoint(i + 1);
        }
    } else {
        // Workers claim indices in order; a bounded window keeps them from
        // racing far ahead of the ordered sink.
        std::vector<std::optional<suites::TaskResult>> slots(count);
        std::vector<std::exception_ptr> errors(count);
        std::mutex mu;
        std::condition_variable cv;
        u64 next_claim = 0, emitted = 0;
        const u64 window = 4 * static_cast<u64>(req.jobs) + 16;
        bool abort = false;
        auto worker = [&] {
            for (;;) {
                u64 idx;
                {
                    std::unique_lock lk(mu);
                    cv.wait(lk, [&] { return abort || next_claim >= count || next_claim < emitted + window; });
                    if (abort || next_claim >= count) return;
                    idx = next_claim++;
                }
                std::optional<suites::TaskResult> res;
                std::exception_ptr err;
                try {
                    res = suites::run_task(req.config, params[start + idx]);
                } catch (...) {
                    err = std::current_exception();
                }
                {
                    std::lock_guard lk(mu);
                    slots[idx] = std::move(res);
                    errors[idx] = err;
                    if (err) slots[idx].emplace();
                }
                cv.notify_all();
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < req.jobs; ++t) pool.emplace_back(worker);
        std::exception_ptr failure;
        for (u64 i = 0; i < count; ++i) {
            suites::TaskResult r;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return slots[i].has_value(); });
                if (errors[i]) {
                    failure = errors[i];
                    abort = true;
                    cv.notify_all();
                    break;
                }
                r = std::move(*slots[i]);
                slots[i].reset();
                emitted = i + 1;
            }
            cv.notify_all();
            try {
                emit(params[start + i], r);
                if ((i + 1) % kCheckpointEvery == 0) checkpoint(start + i + 1);
            } catch (...) {
                failure = std::current_exception();
                std::lock_guard lk(mu);
                abort = true;
                cv.notify_all();
                break;
            }
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    rep.params_done = end;
    rep.complete = end == params.size();
    checkpoint(end);
    if (out.is_open()) out.flush();
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return rep;
}

/// Human-readable summary for standard output.
inline void print_summary(std::ostream& os, const RunReport& rep, std::size_t max_failures = 20) {
    os << "suite " << rep.suite << "  range [" << rep.lo << ", " << rep.hi << "]  params " << rep.params_done << "/" << rep.params_total
       << (rep.complete ? "" : "  (incomplete)") << "\n";
    os << "checks " << rep.attempted() << "  pass " << rep.passes << "  fail " << rep.failures.size() << "  skipped " << rep.skipped << "\n";
    for (const auto& [why, n] : rep.skipped_reasons) os << "  skipped " << n << ": " << why << "\n";
    std::size_t shown = 0;
    for (const auto& f : rep.failures) {
        if (shown++ == max_failures) {
            os << "  ... " << rep.failures.size() - max_failures << " more failures\n";
            break;
        }
        os << "FAIL " << f.dump() << "\n";
    }
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "wall " << rep.wall_seconds << " s\n";
}

}  // namespace qrbench::run
