// Command-line front end: verify suites, scan conjectures, export b-files,
// resume interrupted scans.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrbench/qrbench.hpp"

namespace {

using qrbench::arith::i64;
using qrbench::arith::u64;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// "N" means -N..N; "lo:hi" is explicit.
qrbench::congr::Grid parse_grid(const std::string& s) {
    try {
        const auto colon = s.find(':');
        if (colon == std::string::npos) {
            const i64 n = std::stoll(s);
            if (n < 0) throw UsageError("--grid N needs N >= 0");
            return {-n, n};
        }
        const i64 lo = std::stoll(s.substr(0, colon)), hi = std::stoll(s.substr(colon + 1));
        if (lo > hi) throw UsageError("--grid lo:hi needs lo <= hi");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse --grid '" + s + "'");
    }
}

struct ScanOptions {
    u64 from = 3;
    std::optional<u64> to;
    std::optional<i64> a;
    std::string grid;
    unsigned jobs = 1;
    std::string out;
    std::string checkpoint;
    double tolerance = qrbench::trig::kDefaultTolerance;
    bool no_timing = false;
    std::optional<u64> max_params;
    std::string class_cache;
};

void add_scan_options(CLI::App* cmd, ScanOptions& o) {
    cmd->add_option("--from", o.from, "Lower end of the parameter range")->capture_default_str();
    cmd->add_option("--to", o.to, "Upper end of the parameter range")->required();
    cmd->add_option("--a", o.a, "Multiplier a (default: 1 and the least non-residue)");
    cmd->add_option("--grid", o.grid, "Coefficient grid: N for -N..N, or lo:hi");
    cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--out", o.out, "JSONL results file");
    cmd->add_option("--checkpoint", o.checkpoint, "Checkpoint file, rewritten every 64 parameters");
    cmd->add_option("--tolerance", o.tolerance, "Relative log-magnitude tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--no-timing", o.no_timing, "Omit elapsed_ms so results are byte-reproducible");
    cmd->add_option("--class-cache", o.class_cache, "JSONL cache of class numbers and units");
    cmd->add_option("--max-params", o.max_params, "Stop after this many parameters")->group("");
}

void load_cache(const std::string& path) {
    if (path.empty() || !std::filesystem::exists(path)) return;
    qrbench::classfield::ClassCache::instance().load(path);
}

void save_cache(const std::string& path) {
    if (!path.empty()) qrbench::classfield::ClassCache::instance().save(path);
}

int finish(const qrbench::run::RunReport& rep) {
    qrbench::run::print_summary(std::cout, rep);
    return rep.failures.empty() ? kExitPass : kExitFail;
}

int run_scan(const std::string& suite, const ScanOptions& o) {
    qrbench::run::RunRequest req;
    req.config.suite = suite;
    if (!qrbench::suites::known_suite(suite)) throw UsageError("unknown suite " + suite);
    req.config.a = o.a;
    if (!o.grid.empty()) req.config.grid = parse_grid(o.grid);
    req.config.tolerance = o.tolerance;
    req.lo = o.from;
    req.hi = *o.to;
    if (req.lo > req.hi) throw UsageError("--from must not exceed --to");
    req.jobs = o.jobs;
    req.timing = !o.no_timing;
    req.out_path = o.out;
    req.checkpoint_path = o.checkpoint;
    req.max_params = o.max_params;
    load_cache(o.class_cache);
    const auto rep = qrbench::run::run_suite(req);
    save_cache(o.class_cache);
    return finish(rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification workbench for quadratic-residue products, permutation signs and class numbers"};
    app.require_subcommand(1);

    ScanOptions verify_opts, scan_opts;
    std::string suite, conj_id;
    auto* verify = app.add_subcommand("verify", "Run a verification suite over a parameter range");
    std::string suite_help = "Suite:";
    for (const auto& n : qrbench::suites::suite_names()) suite_help += " " + n;
    suite_help += " conj:<id>";
    verify->add_option("suite", suite, suite_help)->required();
    add_scan_options(verify, verify_opts);

    auto* scan = app.add_subcommand("scan", "Scan one conjecture for counterexamples");
    scan->add_option("conj-id", conj_id, "Conjecture id, 6.1 through 6.8")->required();
    add_scan_options(scan, scan_opts);

    std::string seq_name, export_out;
    u64 export_from = 3;
    std::optional<u64> export_to, export_count;
    unsigned export_jobs = 1;
    auto* exp = app.add_subcommand("export", "Write a sequence over odd primes as a b-file");
    std::string seq_help = "Sequence:";
    for (const auto& s : qrbench::bfile::sequences()) seq_help += " " + s.name;
    exp->add_option("sequence", seq_name, seq_help)->required();
    exp->add_option("--from", export_from, "Smallest prime considered")->capture_default_str();
    auto* to_opt = exp->add_option("--to", export_to, "Largest prime considered");
    auto* count_opt = exp->add_option("--count", export_count, "Number of primes to export");
    to_opt->excludes(count_opt);
    exp->add_option("--jobs", export_jobs, "Worker threads")->check(CLI::PositiveNumber);
    exp->add_option("--out", export_out, "Output path (default: standard output)");

    std::string resume_path, resume_suite;
    unsigned resume_jobs = 1;
    std::optional<u64> resume_max;
    auto* res = app.add_subcommand("resume", "Continue a scan from its checkpoint");
    res->add_option("--checkpoint,checkpoint", resume_path, "Checkpoint file")->required();
    res->add_option("--suite", resume_suite, "Expected suite; must match the checkpoint");
    res->add_option("--jobs", resume_jobs, "Worker threads")->check(CLI::PositiveNumber);
    res->add_option("--max-params", resume_max, "Stop after this many parameters")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify) return run_scan(suite, verify_opts);
        if (*scan) return run_scan("conj:" + conj_id, scan_opts);
        if (*exp) {
            const auto& seq = qrbench::bfile::find_sequence(seq_name);
            if (!export_to && !export_count) throw UsageError("export needs --to or --count");
            const auto primes = qrbench::bfile::indexed_primes(seq, export_from, export_to, export_count);
            const std::string text = qrbench::bfile::render(seq, primes, export_jobs);
            if (export_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream f(export_out, std::ios::binary | std::ios::trunc);
                if (!f) throw std::ios_base::failure("cannot open " + export_out);
                f << text;
                if (!f) throw std::ios_base::failure("write failed for " + export_out);
            }
            return kExitPass;
        }
        if (*res) {
            auto state = qrbench::run::load_checkpoint(resume_path);
            if (!resume_suite.empty() && resume_suite != state.request.config.suite)
                throw UsageError("checkpoint is for suite " + state.request.config.suite + ", not " + resume_suite);
            auto req = state.request;
            req.jobs = resume_jobs;
            req.max_params = resume_max;
            const auto rep = qrbench::run::run_suite(req, state);
            return finish(rep);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qrbench::run::CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
