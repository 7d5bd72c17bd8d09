#include "support/mesh_fixtures.hpp"
#include "support/temp_dir.hpp"

#include "uvwipe/app/config.hpp"
#include "uvwipe/obj_io.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace uvwipe;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult cli(const fixtures::TempDir& dir, const std::string& args) {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string(UVWIPE_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        save_mesh(dir / "square.obj", fixtures::grid_mesh(4));
        app::ProjectConfig c;
        c.mesh = "square.obj";
        c.output_dir = "out";
        c.weights = WeightScheme::uniform;
        c.env.resolution = 64;
        c.env.footprint_radius = 0.1;
        app::save_config(dir / "project.json", c);
    }
    std::string config() const { return "--config " + (dir / "project.json").string(); }
    fixtures::TempDir dir;
};

}  // namespace

TEST_F(Cli, PlanAndEvaluate) {
    ASSERT_EQ(cli(dir, "parameterize " + config()).code, 0);
    ASSERT_EQ(cli(dir, "plan --method zigzag " + config()).code, 0);
    const CliResult r = cli(dir, "evaluate " + config());
    ASSERT_EQ(r.code, 0) << r.err;
    const json report = json::parse(slurp(dir / "out" / "report.json"));
    EXPECT_EQ(report["method"], "zigzag");
    EXPECT_GE(report["coverage_fraction"].get<double>(), 0.99);
}

TEST_F(Cli, MissingArtifactIsJsonError) {
    ASSERT_EQ(cli(dir, "parameterize --quiet " + config()).code, 0);
    const CliResult r = cli(dir, "evaluate --quiet " + config());
    EXPECT_NE(r.code, 0);
    const json err = json::parse(r.err);
    EXPECT_EQ(err["error"]["kind"], "missing-artifact");
    EXPECT_EQ(err["error"]["stage"], "evaluate");
}

TEST_F(Cli, LineageRequiresForce) {
    ASSERT_EQ(cli(dir, "run --stages parameterize,plan --quiet " + config()).code, 0);
    json j = json::parse(slurp(dir / "project.json"));
    j["lift"]["delta"] = 0.04;
    std::ofstream(dir / "project.json") << j.dump();
    const CliResult refused = cli(dir, "evaluate --quiet " + config());
    EXPECT_NE(refused.code, 0);
    EXPECT_EQ(json::parse(refused.err)["error"]["kind"], "lineage-mismatch");
    EXPECT_EQ(cli(dir, "evaluate --force --quiet " + config()).code, 0);
}

TEST_F(Cli, UsageErrorsAndInitConfig) {
    const CliResult bad = cli(dir, "plan --method circles " + config());
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(json::parse(bad.err)["error"]["kind"], "usage");
    ASSERT_EQ(cli(dir, "init-config " + (dir / "defaults.json").string()).code, 0);
    const json defaults = json::parse(slurp(dir / "defaults.json"));
    EXPECT_DOUBLE_EQ(defaults["sac"]["learning_rate"].get<double>(), 3e-4);
    EXPECT_EQ(cli(dir, "--help").code, 0);
}

TEST_F(Cli, RenderWritesSvg) {
    ASSERT_EQ(cli(dir, "run --stages parameterize,plan,lift,render --quiet " + config()).code, 0);
    const std::string svg = slurp(dir / "out" / "map.svg");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(slurp(dir / "out" / "waypoints.csv").find("# config_hash="), std::string::npos);
}
