// Runs the built CLI as a subprocess and checks exit codes and report files.

#include "blockineq/io.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

using namespace blockineq;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun run(const std::string& args, const fs::path& cwd) {
    const std::string cmd = "cd '" + cwd.string() + "' && '" BLOCKINEQ_CLI_PATH "' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) {
    return std::string(BLOCKINEQ_SAMPLES_DIR) + "/" + name;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("blockineq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliRun cli(const std::string& args) { return run(args, dir_); }
    Json report(const std::string& name) { return load_json_file((dir_ / name).string()); }
    std::string text(const std::string& name) { return read_text_file((dir_ / name).string()); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, VerifyPassesAndIsByteIdentical) {
    const CliRun a = cli("verify --dims 2..3 --trials 6 --seed 1 --out a.json");
    ASSERT_EQ(a.code, 0) << a.out;
    const CliRun b = cli("verify --dims 2..3 --trials 6 --seed 1 --out a.json");
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);
    const std::string first = text("a.json");
    ASSERT_EQ(cli("verify --dims 2..3 --trials 6 --seed 1 --out a.json").code, 0);
    EXPECT_EQ(text("a.json"), first);

    const Json j = report("a.json");
    EXPECT_EQ(j["summary"]["failures"], 0);
    EXPECT_EQ(j["manifest"]["seed"], 1);
    EXPECT_EQ(j["manifest"]["command"][1], "verify");
    EXPECT_FALSE(j["manifest"].contains("timestamp"));
    EXPECT_EQ(j["config"]["dims"], Json::array({2, 3}));
}

TEST_F(Cli, VerifyCsvHasFrozenColumnsAndManifest) {
    ASSERT_EQ(cli("verify --dims 1 --trials 2 --seed 4 --suite norms --out r.csv").code, 0);
    const std::string csv = text("r.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
    const Json side = report("r.csv.json");
    EXPECT_TRUE(side.contains("manifest"));
    EXPECT_EQ(side["summary"]["failures"], 0);
}

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli("verify --trials 0 --seed 1").code, 2);
    EXPECT_EQ(cli("verify --dims 2").code, 2);  // seed is mandatory
    EXPECT_EQ(cli("verify --dims 0..3 --seed 1").code, 2);
    EXPECT_EQ(cli("verify --dims x --seed 1").code, 2);
    EXPECT_EQ(cli("verify --seed 1 --suite everything").code, 2);
    EXPECT_EQ(cli("search --k 3").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST_F(Cli, CorruptedJsonExitsTwo) {
    write_text_file((dir_ / "bad.json").string(), "{\"A\": {\"n\": 2, \"re\": [[1, 0], [0");
    const CliRun r = cli("witness --block bad.json");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("ParseError"), std::string::npos) << r.out;
    EXPECT_EQ(cli("witness --block missing.json").code, 2);
    EXPECT_EQ(cli("gram --factors bad.json").code, 2);
}

TEST_F(Cli, WitnessNiceexHasZeroMargin) {
    const CliRun r = cli("witness --block '" + sample("niceex_half.json") + "' --out w.json");
    ASSERT_EQ(r.code, 0) << r.out;
    const Json j = report("w.json");
    EXPECT_NEAR(real_from_json(j["agm_form"]["margin"]), 0.0, 1e-12);
    const Mat v = matrix_from_json(j["agm_form"]["V"][0]);
    EXPECT_NEAR(std::abs(v(0, 1) - 1.0), 0.0, 1e-14);
    EXPECT_EQ(j["manifest"]["inputs"].size(), 1u);
    EXPECT_EQ(j["manifest"]["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST_F(Cli, WitnessIdentityBlockMarginHalf) {
    ASSERT_EQ(cli("witness --block '" + sample("identity_block.json") + "' --out w.json").code, 0);
    EXPECT_NEAR(real_from_json(report("w.json")["agm_form"]["margin"]), 0.5, 1e-12);
    for (const char* op : {"schur", "minus", "mean-plus", "mean-minus"}) {
        EXPECT_EQ(cli("witness --block '" + sample("identity_block.json") + "' --op " + op).code, 0) << op;
    }
    EXPECT_EQ(cli("witness --block '" + sample("identity_block.json") + "' --op times").code, 2);
}

TEST_F(Cli, WitnessRejectsNonPsdWithMargin) {
    const CliRun r = cli("witness --block '" + sample("not_psd.json") + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("NotPsd"), std::string::npos);
    EXPECT_NE(r.out.find("-1"), std::string::npos);
}

TEST_F(Cli, ProbeNiceexArgmax) {
    const CliRun r = cli("probe --family niceex --t-min 0.1 --t-max 10 --t-steps 199 --out p.json");
    ASSERT_EQ(r.code, 0) << r.out;
    const Json j = report("p.json");
    EXPECT_EQ(j["rows"].size(), 199u);
    EXPECT_NEAR(j["argmax"]["param"].get<double>(), 0.5, 0.05);
    EXPECT_NEAR(real_from_json(j["argmax"]["ratio"]), 0.25, 1e-12);
}

TEST_F(Cli, ProbeFixedFamiliesAndRanges) {
    const CliRun ref = cli("probe --family referee --out r.json");
    ASSERT_EQ(ref.code, 0);
    const Json j = report("r.json");
    ASSERT_EQ(j["rows"].size(), 1u);
    EXPECT_NEAR(real_from_json(j["rows"][0]["gap"]), 0.0, 1e-10);
    EXPECT_EQ(cli("probe --family dominance").code, 0);
    EXPECT_EQ(cli("probe --family normal-schur").code, 0);
    EXPECT_EQ(cli("probe --family schur --t-min 0.2 --t-max 5 --t-steps 20").code, 0);
    EXPECT_EQ(cli("probe --family projection --t-min 0.01 --t-max 3 --t-steps 50").code, 0);
    EXPECT_EQ(cli("probe --family niceex --t-min 0 --t-max 1").code, 2);
    EXPECT_EQ(cli("probe --family niceex --t-min 2 --t-max 1").code, 2);
    EXPECT_EQ(cli("probe --family projection --t-min 0.5 --t-max 3.5").code, 2);
    EXPECT_EQ(cli("probe --family circles").code, 2);
}

TEST_F(Cli, SearchRefereeStartAndDeterminism) {
    const CliRun r = cli("search --kind triangle --k 2 --n 3 --budget 200 --restarts 2 --seed 5 --start referee --out s.json");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NEAR(real_from_json(report("s.json")["search"]["best_value"]), 0.5, 1e-9);
    const std::string first = text("s.json");
    ASSERT_EQ(cli("search --kind triangle --k 2 --n 3 --budget 200 --restarts 2 --seed 5 --start referee --out s.json")
                  .code,
              0);
    EXPECT_EQ(text("s.json"), first);
}

TEST_F(Cli, SearchOddKReportsConjectureSummary) {
    const CliRun r = cli("search --kind triangle --k 3 --n 3 --budget 600 --restarts 3 --seed 2 --out c.json");
    ASSERT_EQ(r.code, 0) << r.out;
    const Json j = report("c.json");
    EXPECT_LE(real_from_json(j["search"]["best_value"]), 0.75 + 1e-9);
    EXPECT_EQ(j["conjecture"]["exceeded"], false);
    EXPECT_EQ(cli("search --kind triangle --k 2 --n 2 --budget 10 --restarts 2 --seed 2 --start referee").code, 2);
    EXPECT_EQ(cli("search --kind spiral --seed 2").code, 2);
    EXPECT_EQ(cli("search --budget 1 --restarts 2 --seed 2").code, 2);
}

TEST_F(Cli, TimingIsOptIn) {
    ASSERT_EQ(cli("search --kind theorem-plus --n 2 --budget 100 --restarts 1 --seed 1 --timing --out t.json").code, 0);
    const Json j = report("t.json");
    EXPECT_TRUE(j.contains("wall_time_s"));
    EXPECT_TRUE(j["manifest"].contains("timestamp"));
}

TEST_F(Cli, GramBuildsLoadableBlock) {
    ASSERT_EQ(cli("gram --factors '" + sample("factors.json") + "' --out g.json").code, 0);
    const Json j = report("g.json");
    const PsdBlock blk = block_from_json(j);
    EXPECT_EQ(blk.n(), 2);
    EXPECT_EQ(j["pairs"], 2);
    EXPECT_EQ(cli("witness --block g.json --op minus").code, 0);
}
