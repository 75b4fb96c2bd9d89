#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qrbench/bfile.hpp"
#include "qrbench/runner.hpp"

using namespace qrbench;
namespace fs = std::filesystem;

namespace {

const std::string kCli = QRBENCH_CLI_PATH;

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("qrbench_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

int run_cli(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST(Runner, OutputIndependentOfJobCount) {
    TempDir d;
    for (const std::string suite : {"thm12", "thm16"}) {
        ASSERT_EQ(run_cli("verify " + suite + " --from 3 --to 60 --jobs 1 --no-timing --out " + d.file("j1.jsonl")), 0);
        ASSERT_EQ(run_cli("verify " + suite + " --from 3 --to 60 --jobs 3 --no-timing --out " + d.file("j3.jsonl")), 0);
        const std::string a = slurp(d.file("j1.jsonl"));
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, slurp(d.file("j3.jsonl"))) << suite;
    }
}

TEST(Runner, RecordsHaveStableFields) {
    TempDir d;
    ASSERT_EQ(run_cli("verify thm14 --from 3 --to 40 --out " + d.file("r.jsonl")), 0);
    std::ifstream in(d.file("r.jsonl"));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        const json j = json::parse(line);
        EXPECT_EQ(j.at("suite"), "thm14");
        EXPECT_TRUE(j.contains("p"));
        EXPECT_TRUE(j.at("params").contains("check"));
        EXPECT_TRUE(j.at("pass").get<bool>());
        EXPECT_TRUE(j.contains("lhs") && j.contains("rhs") && j.contains("elapsed_ms"));
        ++n;
    }
    EXPECT_GT(n, 0);
}

TEST(Runner, ResumeReproducesUninterruptedOutput) {
    TempDir d;
    ASSERT_EQ(run_cli("verify lemmas --from 3 --to 301 --no-timing --out " + d.file("full.jsonl")), 0);
    // Stop partway, then resume from the checkpoint.
    ASSERT_EQ(run_cli("verify lemmas --from 3 --to 301 --no-timing --max-params 70 --out " + d.file("part.jsonl") + " --checkpoint " +
                      d.file("ck.json")),
              0);
    const json ck = json::parse(slurp(d.file("ck.json")));
    EXPECT_FALSE(ck.at("complete").get<bool>());
    EXPECT_EQ(ck.at("next_index").get<int>(), 70);
    // Lines written after the last checkpoint are discarded on resume.
    std::ofstream(d.file("part.jsonl"), std::ios::app) << "{\"garbage\":true}\n";
    ASSERT_EQ(run_cli("resume --checkpoint " + d.file("ck.json") + " --jobs 2"), 0);
    EXPECT_EQ(slurp(d.file("full.jsonl")), slurp(d.file("part.jsonl")));
    EXPECT_TRUE(json::parse(slurp(d.file("ck.json"))).at("complete").get<bool>());
    // Resuming a finished scan changes nothing.
    ASSERT_EQ(run_cli("resume " + d.file("ck.json")), 0);
    EXPECT_EQ(slurp(d.file("full.jsonl")), slurp(d.file("part.jsonl")));
}

TEST(Runner, ResumeRejectsBadCheckpoints) {
    TempDir d;
    ASSERT_EQ(run_cli("verify thm11 --from 3 --to 99 --max-params 10 --out " + d.file("o.jsonl") + " --checkpoint " + d.file("ck.json")), 0);
    EXPECT_EQ(run_cli("resume --checkpoint " + d.file("ck.json") + " --suite thm12"), 2);
    std::ofstream(d.file("bad.json")) << "{\"suite\": \"thm11\", \"from\": ";
    EXPECT_EQ(run_cli("resume --checkpoint " + d.file("bad.json")), 2);
    EXPECT_EQ(run_cli("resume --checkpoint " + d.file("missing.json")), 2);
    EXPECT_THROW(run::load_checkpoint(d.file("bad.json")), run::CheckpointError);
}

TEST(Runner, ExitCodes) {
    TempDir d;
    EXPECT_EQ(run_cli("verify mordell --from 3 --to 50"), 0);
    // The floor determinant at n = 7 is a genuine counterexample.
    EXPECT_EQ(run_cli("scan 6.8 --to 9 --out " + d.file("c.jsonl")), 1);
    EXPECT_NE(slurp(d.file("c.jsonl")).find("\"witness\""), std::string::npos);
    EXPECT_EQ(run_cli("verify nosuch --to 10"), 2);
    EXPECT_EQ(run_cli("verify thm11"), 2);
    EXPECT_EQ(run_cli("verify thm11 --from 20 --to 10"), 2);
    EXPECT_EQ(run_cli("scan 9.9 --to 10"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("verify thm11 --to 10 --out /nonexistent-dir/x.jsonl"), 2);
    EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Runner, ScanHaltsEachCheckAfterCounterexample) {
    run::RunRequest req;
    req.config.suite = "conj:6.8";
    req.lo = 3;
    req.hi = 21;
    req.timing = false;
    const auto rep = run::run_suite(req);
    ASSERT_EQ(rep.failures.size(), 1u);
    EXPECT_EQ(rep.failures[0].at("n"), 7);
    EXPECT_EQ(rep.halted_checks.count("floor_square_product_det"), 1u);
    EXPECT_EQ(rep.skipped_reasons.at("halted after counterexample: floor_square_product_det"), 7u);
    EXPECT_EQ(rep.attempted(), 2 * 10u);
}

TEST(Bfile, SquareListSequence) {
    const auto& seq = bfile::find_sequence("s_p");
    EXPECT_EQ(bfile::render(seq, bfile::indexed_primes(seq, 3, std::nullopt, 4)), "1 0\n2 0\n3 1\n4 4\n");
    const auto& h = bfile::find_sequence("h_minus");
    EXPECT_EQ(bfile::render(h, bfile::indexed_primes(h, 3, std::nullopt, 3)), "1 1\n2 1\n3 1\n");
    EXPECT_EQ(bfile::render(seq, bfile::indexed_primes(seq, 3, 2, std::nullopt)), "");
    EXPECT_THROW(bfile::find_sequence("nope"), std::invalid_argument);
}

TEST(Bfile, CliExportIsStable) {
    TempDir d;
    ASSERT_EQ(run_cli("export s_p --count 100 --out " + d.file("a.txt")), 0);
    ASSERT_EQ(run_cli("export s_p --count 100 --jobs 3 --out " + d.file("b.txt")), 0);
    const std::string a = slurp(d.file("a.txt"));
    EXPECT_EQ(a, slurp(d.file("b.txt")));
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 100);
    EXPECT_EQ(a.substr(0, 16), "1 0\n2 0\n3 1\n4 4\n");
    ASSERT_EQ(run_cli("export h_plus --from 3 --to 4 --out " + d.file("e.txt")), 0);
    EXPECT_EQ(slurp(d.file("e.txt")), "");
    EXPECT_EQ(run_cli("export s_p --to 10 --count 3"), 2);
    EXPECT_EQ(run_cli("export nope --count 3"), 2);
}
