#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bbench/config.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("bbench_") + info->name() + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    int run(const std::string& args) const {
        const std::string cmd = std::string(BBENCH_EXE) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static std::string first_line(const fs::path& p) {
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);
        return line;
    }

    fs::path dir_;
};

const std::string kSmallGrid = R"("grid": {"L": 30, "N": 512})";

}  // namespace

TEST_F(Cli, VerifyPasses) {
    const fs::path out = dir_ / "verify";
    ASSERT_EQ(run("verify --config " + std::string(BBENCH_CONFIG_DIR) + "/default.json --out " + out.string()), 0);
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    EXPECT_EQ(report.at("status"), "pass");
    EXPECT_FALSE(report.at("checks").empty());
    EXPECT_EQ(report.at("thresholds").at("elliptic").at("source"), "default");
}

TEST_F(Cli, ReportsAreDeterministic) {
    const std::string cfg = std::string(BBENCH_CONFIG_DIR) + "/default.json";
    ASSERT_EQ(run("verify --config " + cfg + " --out " + (dir_ / "a").string()), 0);
    ASSERT_EQ(run("verify --config " + cfg + " --out " + (dir_ / "b").string()), 0);
    EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
}

TEST_F(Cli, UnknownSubcommand) {
    EXPECT_EQ(run("frobnicate --config x.json --out " + dir_.string()), 2);
    EXPECT_EQ(run(""), 2);
}

TEST_F(Cli, StabilityRejectsLargeEta) {
    const fs::path cfg = write_config("eta.json", R"({"stability": {"eta": 0.1}})");
    EXPECT_EQ(run("stability --config " + cfg.string() + " --out " + (dir_ / "s").string()), 2);
    EXPECT_NE(slurp(dir_ / "stdout.txt").find("eta"), std::string::npos);
}

TEST_F(Cli, ConfigErrors) {
    EXPECT_EQ(run("verify --config " + (dir_ / "missing.json").string() + " --out " + dir_.string()), 2);
    const fs::path bad_key = write_config("bad.json", R"({"grid": {"L": 30, "M": 4}})");
    EXPECT_EQ(run("verify --config " + bad_key.string() + " --out " + dir_.string()), 2);
    const fs::path bad_json = write_config("broken.json", "{ not json");
    EXPECT_EQ(run("verify --config " + bad_json.string() + " --out " + dir_.string()), 2);
}

TEST_F(Cli, SpectrumWritesEigenvalues) {
    const fs::path cfg = write_config("spectrum.json", "{" + kSmallGrid + R"(, "spectrum": {"k": 8}})");
    const fs::path out = dir_ / "spectrum";
    ASSERT_EQ(run("spectrum --config " + cfg.string() + " --out " + out.string()), 0);
    EXPECT_EQ(first_line(out / "eigenvalues.csv"), "index,lambda");
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    EXPECT_EQ(report.at("status"), "pass");
}

TEST_F(Cli, EvolveWritesSeries) {
    const fs::path cfg = write_config(
        "ev.json", "{" + kSmallGrid + R"(, "evolution": {"dt": 0.001, "t_end": 0.1, "output_stride": 10}})");
    const fs::path out = dir_ / "evolve";
    const int code = run("evolve --config " + cfg.string() + " --out " + out.string());
    EXPECT_TRUE(code == 0 || code == 1) << code;
    EXPECT_EQ(first_line(out / "error_series.csv"), "t,z_h2,x1,x2,M,E,F,H");
    EXPECT_EQ(first_line(out / "snapshots.csv"), "t,x,u");
    EXPECT_TRUE(fs::exists(out / "report.json"));
}

TEST_F(Cli, NumericalFaultExitsThree) {
    const fs::path cfg = write_config(
        "blow.json", "{" + kSmallGrid + R"(, "params": {"alpha": 3, "beta": 3}, "evolution": {"dt": 0.05, "t_end": 2}})");
    EXPECT_EQ(run("evolve --config " + cfg.string() + " --out " + (dir_ / "e").string()), 3);
}

TEST(Config, Defaults) {
    const bbench::RunConfig cfg = bbench::parse_config("{}");
    EXPECT_EQ(cfg.half_width, 30.0);
    EXPECT_EQ(cfg.n_points, 2048u);
    EXPECT_EQ(cfg.stability.eta, 1e-3);
    EXPECT_EQ(cfg.tolerances.entry("mass").source, "default");
}

TEST(Config, ToleranceOverride) {
    const bbench::RunConfig cfg = bbench::parse_config(R"({"tolerances": {"sup_ratio": 20}})");
    EXPECT_EQ(cfg.tolerances["sup_ratio"], 20.0);
    EXPECT_EQ(cfg.tolerances.entry("sup_ratio").source, "config");
    EXPECT_THROW(bbench::parse_config(R"({"tolerances": {"nonsense": 1}})"), bbench::ConfigError);
}

TEST(Config, Validation) {
    EXPECT_THROW(bbench::parse_config(R"({"grid": {"N": 15}})"), bbench::ConfigError);
    EXPECT_THROW(bbench::parse_config(R"({"evolution": {"dt": -1}})"), bbench::ConfigError);
    EXPECT_THROW(bbench::parse_config(R"({"evolution": {"scheme": "euler"}})"), bbench::ConfigError);
    EXPECT_THROW(bbench::parse_config(R"({"params": {"alpha": 0}})"), bbench::ConfigError);
    EXPECT_THROW(bbench::parse_config(R"({"stability": {"k_max": 1000}})"), bbench::ConfigError);
    EXPECT_THROW(bbench::parse_config("[1, 2]"), bbench::ConfigError);
}
