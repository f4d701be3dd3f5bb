// Drives the built branchlab binary through the shell.

#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

#ifndef BRANCHLAB_BIN
#error "BRANCHLAB_BIN must name the CLI binary"
#endif

namespace {

class Cli : public testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        const auto* info = testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("branchlab_cli_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    // Runs the CLI in the temp dir; returns its exit status.
    int run(const std::string& args, const std::string& env = "") {
        const std::string cmd = "cd '" + dir.string() + "' && " + env + (env.empty() ? "" : " ") + "'" +
                                BRANCHLAB_BIN + "' " + args + " > stdout.txt 2> stderr.txt";
        const int st = std::system(cmd.c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }

    std::string slurp(const fs::path& p) const {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
    std::string out() const { return slurp(dir / "stdout.txt"); }
};

}  // namespace

TEST_F(Cli, DominationSevenPasses) {
    ASSERT_EQ(run("lemma domination --w0 7 --kmax 8 --json"), 0) << out();
    const auto j = nlohmann::json::parse(slurp(dir / "lemma-domination.json"));
    EXPECT_EQ(j["header"]["flags"]["w0"], "7");
    EXPECT_EQ(j["header"]["flags"]["kmax"], "8");
    EXPECT_FALSE(fs::exists(dir / "lemma-domination.Theorem2.1.cert.json"));
}

TEST_F(Cli, ViolationWritesReplayableCertificate) {
    ASSERT_EQ(run("lemma domination --w0 27 --kmax 4"), 2) << out();
    const fs::path cert = dir / "lemma-domination.Theorem2.1.cert.json";
    ASSERT_TRUE(fs::exists(cert));
    EXPECT_EQ(run("lemma replay --certificate " + cert.filename().string()), 0);
    EXPECT_NE(out().find("reproduced"), std::string::npos);
}

TEST_F(Cli, FloorAddCertificatesPerInterpretation) {
    EXPECT_EQ(run("lemma floor-add-search --max-den 4 --max-val 2 --interpretation both"), 2);
    EXPECT_TRUE(fs::exists(dir / "lemma-floor-add-search.integer_part.Lemma2.2.cert.json"));
    EXPECT_TRUE(fs::exists(dir / "lemma-floor-add-search.all_scales.Lemma2.2.cert.json"));
    EXPECT_EQ(run("lemma replay --certificate lemma-floor-add-search.all_scales.Lemma2.2.cert.json"), 0);
}

TEST_F(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("branch iterate --xi 3/0"), 1);
    EXPECT_EQ(run("branch iterate --xi abc"), 1);
    EXPECT_EQ(run("syracuse scan --from 9 --to 7"), 1);
    EXPECT_EQ(run("syracuse trace --w0 8"), 1);
    EXPECT_EQ(run("ca render --w0 7 --format png"), 1);
    EXPECT_EQ(run("lemma replay --certificate missing.json"), 1);
    EXPECT_EQ(run("nonsense"), 1);
    EXPECT_EQ(run("lemma domination --w0 7 --json --csv"), 1);
}

TEST_F(Cli, IterateWritesCsvWithPreamble) {
    ASSERT_EQ(run("branch iterate --p 3 --q 2 --xi 14 --perturbation syracuse:2/3 --steps 5 --csv"), 0) << out();
    const auto csv = slurp(dir / "branch-iterate.csv");
    EXPECT_EQ(csv.rfind("# branchlab-csv v1 branch-trajectory\n# flags ", 0), 0u);
    EXPECT_NE(csv.find("\n3,13/2,"), std::string::npos);
}

TEST_F(Cli, ScanAndTrace) {
    EXPECT_EQ(run("syracuse scan --from 1 --to 99"), 0) << out();
    EXPECT_TRUE(fs::exists(dir / "syracuse-scan.csv"));
    EXPECT_EQ(run("syracuse scan --from 27 --to 27 --cap 5"), 2);
    EXPECT_EQ(run("syracuse trace --w0 7 --json"), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "syracuse-trace.json"));
    EXPECT_EQ(j["result"]["steps"].size(), 6u);
}

TEST_F(Cli, OutputDirectoryOverride) {
    const fs::path alt = dir / "alt";
    ASSERT_EQ(run("lemma determinism --w0 7", "BRANCHLAB_OUT='" + alt.string() + "'"), 0);
    EXPECT_TRUE(fs::exists(alt / "lemma-determinism.json"));
    EXPECT_FALSE(fs::exists(dir / "lemma-determinism.json"));
}

TEST_F(Cli, RenderIsIndependentOfWorkers) {
    ASSERT_EQ(run("ca render --w0 27 --rows 60 --format pbm --workers 1 --out a.pbm"), 0) << out();
    ASSERT_EQ(run("ca render --w0 27 --rows 60 --format pbm --workers 4 --out b.pbm"), 0);
    const auto a = slurp(dir / "a.pbm");
    EXPECT_EQ(a.rfind("P1\n", 0), 0u);
    EXPECT_EQ(a, slurp(dir / "b.pbm"));
    EXPECT_EQ(run("ca render --w0 27 --rows 60 --width 8 --format pbm --out c.pbm"), 1);
}

TEST_F(Cli, RenderOverlaySvg) {
    ASSERT_EQ(run("ca render --w0 7 --rows 6 --overlay --format svg --out o.svg"), 0) << out();
    const auto s = slurp(dir / "o.svg");
    EXPECT_NE(s.find("#d62728"), std::string::npos);
}
