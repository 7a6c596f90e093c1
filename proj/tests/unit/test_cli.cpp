#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "nullest/rng.hpp"

using nullest::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir()
        : path_(fs::temp_directory_path() /
                ("nullest_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

private:
    fs::path path_;
};

std::string normal_file(std::size_t n, double mean, double sd, std::uint64_t seed) {
    nullest::Stream s(seed);
    std::ostringstream o;
    o << "# z-scores\n";
    for (std::size_t i = 0; i < n; ++i) o << nullest::format_double(mean + sd * s.normal()) << "\n";
    return o.str();
}

}  // namespace

TEST(Cli, EstimateKnownK) {
    TempDir dir;
    const auto in = dir.write("x.txt", normal_file(1000, 1.5, 2.0, 1));
    const CliRun r = run({"estimate", "--input", in, "--k", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("theta_hat").get<double>(), 1.5, 0.3);
    EXPECT_NEAR(j.at("sigma2_hat").get<double>(), 4.0, 0.5);
    EXPECT_EQ(j.at("k_used_or_adaptive").get<int>(), 10);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys.size(), 6u);
}

TEST(Cli, EstimateOutputRoundTrips) {
    TempDir dir;
    const auto in = dir.write("x.txt", normal_file(500, 0.0, 1.0, 2));
    const CliRun a = run({"estimate", "-i", in, "--k", "20", "--seed", "4"});
    const CliRun b = run({"estimate", "-i", in, "--k", "20", "--seed", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    for (const char* key : {"theta_hat", "sigma2_hat", "tau", "pilot_sigma2", "tv_rate_bound"}) {
        const std::string printed = nullest::format_double(j.at(key).get<double>());
        EXPECT_NE(a.out.find(printed), std::string::npos) << key;
        EXPECT_EQ(nullest::parse_double(printed), j.at(key).get<double>());
    }
}

TEST(Cli, EstimateAdaptive) {
    TempDir dir;
    const auto in = dir.write("x.txt", normal_file(400, -1.0, 1.0, 3));
    const CliRun r = run({"estimate", "-i", in, "--adaptive"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("k_used_or_adaptive").get<std::string>(), "adaptive");
    EXPECT_TRUE(j.contains("k_prime_location"));
    EXPECT_TRUE(j.contains("k_prime_variance"));
    EXPECT_NEAR(j.at("theta_hat").get<double>(), -1.0, 0.5);
}

TEST(Cli, EstimateErrors) {
    TempDir dir;
    EXPECT_EQ(run({"estimate", "-i", dir.write("empty.txt", "")}).code, 2);
    const CliRun bad = run({"estimate", "-i", dir.write("bad.txt", "1.0\n2.0\nabc\n"), "--k", "1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;
    const auto in = dir.write("x.txt", normal_file(100, 0.0, 1.0, 4));
    EXPECT_EQ(run({"estimate", "-i", in, "--k", "100"}).code, 3);
    EXPECT_EQ(run({"estimate", "-i", in, "--k", "50"}).code, 3);
    EXPECT_EQ(run({"estimate", "-i", in}).code, 2);
    EXPECT_EQ(run({"estimate", "-i", in, "--k", "5", "--adaptive"}).code, 2);
    EXPECT_EQ(run({"estimate", "-i", in, "--k", "5", "--set", "bogus=1"}).code, 2);
    EXPECT_EQ(run({"estimate", "-i", dir.write("const.txt", "1\n1\n1\n1\n1\n1\n1\n1\n1\n1\n"), "--k", "2"}).code, 4);
}

TEST(Cli, ParseValues) {
    std::istringstream in("# header\n1.5\n\n  -2e3  \n");
    EXPECT_EQ(nullest::cli::parse_values(in), (std::vector<double>{1.5, -2000.0}));
    std::istringstream bad("1\nnan\n");
    EXPECT_THROW(nullest::cli::parse_values(bad), nullest::InvalidArgument);
}

TEST(Cli, SimulateThenEstimate) {
    TempDir dir;
    const std::string path = dir.write("sim.txt", "");
    const CliRun s = run({"simulate", "--n", "600", "--k", "60", "--theta", "2", "--seed", "5", "-o", path});
    ASSERT_EQ(s.code, 0) << s.err;
    const CliRun e = run({"estimate", "-i", path, "--k", "60"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_NEAR(nlohmann::json::parse(e.out).at("theta_hat").get<double>(), 2.0, 0.5);
}

TEST(Cli, SweepMinimal) {
    TempDir dir;
    const auto spec = dir.write("s.json", R"({"n": 100, "k": 5, "trials": 2, "estimators": ["median"], "seed": 1})");
    const CliRun r = run({"sweep", "-i", spec});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
    EXPECT_EQ(r.out.rfind("estimator,n,k,trials,", 0), 0u);
    EXPECT_EQ(run({"sweep", "-i", spec}).out, r.out);
    const CliRun j = run({"sweep", "-i", spec, "--format", "json"});
    ASSERT_EQ(j.code, 0);
    EXPECT_EQ(nlohmann::json::parse(j.out).at("rows").size(), 1u);
}

TEST(Cli, SweepErrors) {
    TempDir dir;
    const CliRun r = run({"sweep", "-i", dir.write("s.json", R"({"n": 100, "k": 5, "trials": 2, "estimators": ["nope"]})")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("nope"), std::string::npos);
    EXPECT_EQ(run({"sweep", "-i", dir.write("t.json", "not json")}).code, 2);
    EXPECT_EQ(run({"sweep", "-i", dir.write("u.json", R"({"n": 100, "k": 5, "trials": 1, "estimators": ["median"]})"),
                   "--format", "xml"})
                  .code,
              2);
}

TEST(Cli, VerifyLowerBound) {
    const CliRun ok = run({"verify-lowerbound", "--eps", "0.5"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    const auto j = nlohmann::json::parse(ok.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_TRUE(j[0].at("passed").get<bool>());

    const CliRun bad = run({"verify-lowerbound", "--eps", "0.3", "--set", "c0=0.5"});
    EXPECT_EQ(bad.code, 5);
    EXPECT_NE(bad.err.find("verification failed"), std::string::npos);
    EXPECT_NE(bad.err.find("c0"), std::string::npos) << bad.err;
    EXPECT_EQ(run({"verify-lowerbound", "--eps", "0.7"}).code, 2);
}

TEST(Cli, RatesAndHelp) {
    const CliRun r = run({"rates", "--n", "10000", "--k", "10,2500"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("0.0001"), std::string::npos);
    EXPECT_EQ(run({"rates", "--n", "100", "--k", "50"}).code, 3);
    const CliRun h = run({"--help"});
    EXPECT_EQ(h.code, 0);
    EXPECT_NE(h.out.find("estimate"), std::string::npos);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}
