#include "uvwipe/app/config.hpp"
#include "uvwipe/app/pipeline.hpp"
#include "uvwipe/error.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace uvwipe;

namespace {

struct Common {
    std::string config;
    std::string mesh;
    std::string region;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool quiet = false;
};

int report_error(const std::string& kind, const std::string& message, const std::string& stage) {
    nlohmann::json j = {{"error", {{"kind", kind}, {"message", message}, {"stage", stage}}}};
    std::cerr << j.dump() << '\n';
    return 1;
}

app::ProjectConfig build_config(const Common& c) {
    app::ProjectConfig config = c.config.empty() ? app::ProjectConfig{} : app::load_config(c.config);
    if (!c.mesh.empty()) config.mesh = c.mesh;
    if (!c.region.empty()) config.region = c.region;
    if (!c.out.empty()) config.output_dir = c.out;
    if (c.seed) {
        config.seed = *c.seed;
        config.train.seed = app::stage_seed(config.seed, "train");
    }
    return config;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "Project config JSON");
    sub->add_option("--mesh", c.mesh, "Mesh OBJ, overrides the config");
    sub->add_option("--region", c.region, "Face selection file, overrides the config");
    sub->add_option("--out", c.out, "Output directory, overrides the config");
    sub->add_option("--seed", c.seed, "Project seed, overrides the config");
    sub->add_flag("--force", c.force, "Accept upstream artifacts from a different config");
    sub->add_flag("--quiet", c.quiet, "Suppress progress lines");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Coverage path planning on UV-mapped surfaces"};
    cli.require_subcommand(1);
    Common common;
    app::StageOptions options;
    std::string chart, checkpoint, stages_text;
    bool stochastic = false;
    std::optional<std::uint64_t> start_seed;

    struct Entry {
        CLI::App* sub;
        std::optional<app::Stage> stage;
    };
    std::vector<Entry> entries;
    auto stage_cmd = [&](app::Stage stage, const std::string& help) {
        CLI::App* sub = cli.add_subcommand(std::string(app::to_string(stage)), help);
        add_common(sub, common);
        sub->add_option("--chart", chart, "Chart artifact, defaults to <out>/chart.json");
        entries.push_back({sub, stage});
        return sub;
    };
    stage_cmd(app::Stage::parameterize, "Harmonic UV map of the mesh region");
    CLI::App* plan = stage_cmd(app::Stage::plan, "Zigzag or spiral baseline path");
    plan->add_option("--method", options.method, "zigzag or spiral")->check(CLI::IsMember({"zigzag", "spiral"}));
    stage_cmd(app::Stage::train, "Train the SAC coverage policy");
    CLI::App* rollout = stage_cmd(app::Stage::rollout, "Roll out a trained policy into a path");
    rollout->add_option("--checkpoint", checkpoint, "Checkpoint, defaults to <out>/checkpoint.bin");
    rollout->add_flag("--deterministic", "Use the policy mean (default)");
    rollout->add_flag("--stochastic", stochastic, "Sample actions from the policy");
    rollout->add_option("--start-seed", start_seed, "Seed for the start pose");
    stage_cmd(app::Stage::lift, "Lift the UV path to end-effector waypoints");
    stage_cmd(app::Stage::evaluate, "Path length, coverage area and rotation metrics");
    stage_cmd(app::Stage::render, "SVG of the chart raster and path");

    CLI::App* run = cli.add_subcommand("run", "Run several stages in order");
    add_common(run, common);
    run->add_option("--chart", chart, "Chart artifact, defaults to <out>/chart.json");
    run->add_option("--stages", stages_text, "Comma-separated stage list")->required();
    run->add_option("--method", options.method, "Planner for the plan stage")
        ->check(CLI::IsMember({"zigzag", "spiral"}));
    entries.push_back({run, std::nullopt});

    std::string config_out;
    CLI::App* init = cli.add_subcommand("init-config", "Write a config with every default spelled out");
    init->add_option("path", config_out, "Destination file")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        msg << e.what();
        report_error("usage", msg.str(), "");
        return 2;
    }

    if (init->parsed()) {
        try {
            app::save_config(config_out, app::ProjectConfig{});
            return 0;
        } catch (const Error& e) {
            return report_error(std::string(to_string(e.kind())), e.what(), "init-config");
        }
    }

    std::string current;
    try {
        const app::ProjectConfig config = build_config(common);
        options.force = common.force;
        options.deterministic = !stochastic;
        options.start_seed = start_seed;
        if (!chart.empty()) options.chart = chart;
        if (!checkpoint.empty()) options.checkpoint = checkpoint;
        if (!common.quiet) {
            options.progress = [&](const std::string& line) { std::cerr << "[" << current << "] " << line << '\n'; };
        }
        std::vector<app::Stage> stages;
        for (const Entry& e : entries) {
            if (!e.sub->parsed()) continue;
            if (e.stage) {
                stages.push_back(*e.stage);
            } else {
                std::stringstream list(stages_text);
                std::string item;
                while (std::getline(list, item, ',')) {
                    if (!item.empty()) stages.push_back(app::parse_stage(item));
                }
            }
        }
        for (app::Stage s : stages) {
            current = std::string(app::to_string(s));
            const auto artifact = app::run_stage(s, config, options);
            std::cout << artifact.string() << '\n';
        }
        return 0;
    } catch (const Error& e) {
        return report_error(std::string(to_string(e.kind())), e.what(), current);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), current);
    }
}
