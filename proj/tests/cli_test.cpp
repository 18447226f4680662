#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = muxdyn::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("muxdyn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

const std::string toy = muxdyn::test::data_path("toy.json");

}  // namespace

TEST_F(CliTest, StatsToStdout) {
    const auto r = run({"stats", "--input", toy});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[0], "graph,density,transitivity,reciprocity,mean_degree,avg_path_length,clique_number");
    EXPECT_EQ(l[1], "A,0.6666666667,0,,1.333333333,1.333333333,2");
    EXPECT_EQ(l[2].substr(0, 2), "B,");
}

TEST_F(CliTest, StatsWritesArtifacts) {
    const auto r = run({"stats", "--input", toy, "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(fs::exists(dir_ / "stats.csv"));
    const auto config = json::parse(slurp(dir_ / "stats.config.json"));
    EXPECT_EQ(config["transitivity"], "cyclic");
    const auto bounds = json::parse(slurp(dir_ / "bounds.json"));
    EXPECT_FALSE(bounds["checks"].empty());
}

TEST_F(CliTest, InputErrorsExitTwo) {
    EXPECT_EQ(run({"stats", "--input", "/nonexistent.json"}).code, 2);
    EXPECT_EQ(run({"stats"}).code, 2);
    EXPECT_EQ(run({"stats", "--input", toy, "--gen", "10,2,er:0.1"}).code, 2);
    EXPECT_EQ(run({"stats", "--gen", "10,3,er:0.1/ba:2"}).code, 2);
    EXPECT_EQ(run({"stats", "--input", toy, "--reciprocity", "bogus"}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--input", toy, "--check", "nope"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--input", toy, "--check", "prop2"}).code, 2);
    EXPECT_EQ(run({"simulate", "--input", toy, "--mode", "diffuse", "--dt", "1"}).code, 2);
    EXPECT_EQ(run({"simulate", "--input", toy, "--start", "copy:Z:1"}).code, 2);
    const auto r = run({"stats", "--input", "/nonexistent.json"});
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(CliTest, StatsOnGeneratedMultiplex) {
    const auto a = run({"stats", "--gen", "30,3,er:0.2/ba:2/ws:4:0.1", "--seed", "4"});
    const auto b = run({"stats", "--gen", "30,3,er:0.2/ba:2/ws:4:0.1", "--seed", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out).size(), 6u);
}

TEST_F(CliTest, Figure2Shape) {
    const auto r = run({"figure2", "--gen", "40,3,er:0.1/ba:2/ws:4:0.1", "--seeds", "3..6", "--jobs", "3", "--out",
                        dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(slurp(dir_ / "figure2.csv"));
    EXPECT_EQ(l[0], "seed,graph,statistic,value");
    // 4 seeds x (3 layers + aggregate + matched sum) x 4 statistics
    EXPECT_EQ(l.size(), 1u + 4u * 5u * 4u);
    EXPECT_EQ(l[1].substr(0, 2), "3,");
    EXPECT_EQ(l.back().substr(0, 2), "6,");
    const auto bounds = json::parse(slurp(dir_ / "figure2_bounds.json"));
    EXPECT_TRUE(bounds["failures"].empty());
    for (const auto& c : bounds["claims"]) EXPECT_EQ(c["seeds"], 4);

    const auto serial = run({"figure2", "--gen", "40,3,er:0.1/ba:2/ws:4:0.1", "--seeds", "3..6", "--jobs", "1"});
    EXPECT_EQ(serial.out, slurp(dir_ / "figure2.csv"));
}

TEST_F(CliTest, SpectrumChecksOnToy) {
    const auto r = run({"spectrum", "--input", toy, "--check", "prop1,prop3,prop4,general,centrality", "--out",
                        dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(slurp(dir_ / "spectrum.json"));
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["operator"]["dim"], 6);
    EXPECT_NEAR(j["summary"]["fiedler_value"].get<double>(), 2.0, 1e-10);
    EXPECT_EQ(j["checks"].size(), 6u);
}

TEST_F(CliTest, SpectrumWalkPrimitivity) {
    const auto r = run({"spectrum", "--input", toy, "--dynamics", "random_walk", "--check", "prop2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["checks"][0]["primitivity_implied"].get<bool>() == false);
    EXPECT_TRUE(j["properties"]["primitive"].get<bool>());
}

TEST_F(CliTest, SimulateWalk) {
    const auto r = run({"simulate", "--input", toy, "--mode", "walk", "--start", "copy:A:1", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(slurp(dir_ / "trajectory.csv"));
    EXPECT_EQ(l[0], "t,A:1,A:2,A:3,B:1,B:2,B:3,total");
    EXPECT_EQ(l[1], "0,1,0,0,0,0,0,1");
    const auto s = json::parse(slurp(dir_ / "summary.json"));
    EXPECT_TRUE(s["converged"].get<bool>());
    EXPECT_LT(s["final_residual"].get<double>(), 1e-9);
}

TEST_F(CliTest, SimulateWalkNonConvergenceExitsThree) {
    const auto r = run({"simulate", "--input", toy, "--coupling", "identity", "--start", "copy:A:1", "--max-steps",
                        "50"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("did not converge"), std::string::npos);
}

TEST_F(CliTest, SimulateDiffusionModes) {
    const auto full = run({"simulate", "--input", toy, "--mode", "diffuse", "--T", "1", "--dt", "0.01"});
    ASSERT_EQ(full.code, 0) << full.err;
    EXPECT_EQ(lines(full.out).size(), 102u);
    const auto reduced =
        run({"simulate", "--input", toy, "--mode", "diffuse_reduced", "--start", "node:2", "--T", "1", "--dt", "0.01"});
    ASSERT_EQ(reduced.code, 0) << reduced.err;
    EXPECT_EQ(lines(reduced.out)[0], "t,1,2,3,total");
    EXPECT_EQ(lines(reduced.out)[1], "0,0,1,0,1");
}
