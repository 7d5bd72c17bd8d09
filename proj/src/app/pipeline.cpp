#include "uvwipe/app/pipeline.hpp"
#include "uvwipe/app/render.hpp"
#include "uvwipe/error.hpp"
#include "uvwipe/grid_world.hpp"
#include "uvwipe/metrics.hpp"
#include "uvwipe/obj_io.hpp"
#include "uvwipe/path_lift.hpp"
#include "uvwipe/rl/checkpoint.hpp"
#include "uvwipe/rl/trainer.hpp"

#include <fstream>

namespace uvwipe::app {

namespace {

void say(const StageOptions& options, const std::string& line) {
    if (options.progress) options.progress(line);
}

ChartArtifact upstream_chart(const ProjectConfig& config, const ArtifactPaths& paths,
                             const StageOptions& options) {
    const std::filesystem::path file = options.chart.value_or(paths.chart);
    ChartArtifact chart = load_chart(file);
    check_lineage(file, chart.config_hash, config_hash(config), options.force);
    return chart;
}

PathArtifact upstream_path(const ProjectConfig& config, const ArtifactPaths& paths, bool force) {
    PathArtifact path = load_path(paths.path);
    check_lineage(paths.path, path.config_hash, config_hash(config), force);
    return path;
}

std::ofstream open_text(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::parameterize: return "parameterize";
        case Stage::plan: return "plan";
        case Stage::train: return "train";
        case Stage::rollout: return "rollout";
        case Stage::lift: return "lift";
        case Stage::evaluate: return "evaluate";
        case Stage::render: return "render";
    }
    return "parameterize";
}

Stage parse_stage(std::string_view text) {
    for (Stage s : {Stage::parameterize, Stage::plan, Stage::train, Stage::rollout, Stage::lift,
                    Stage::evaluate, Stage::render}) {
        if (to_string(s) == text) return s;
    }
    throw Error(ErrorKind::invalid_argument, "unknown stage '" + std::string(text) + "'");
}

std::filesystem::path run_parameterize(const ProjectConfig& config, const StageOptions& options) {
    config.validate(true);
    const ArtifactPaths paths(config.output_dir);
    TriangleMesh mesh = load_mesh(config.mesh);
    if (!config.region.empty()) {
        mesh = extract_region(mesh, load_face_selection(config.region)).mesh;
    }
    ChartArtifact artifact;
    artifact.chart = parameterize(mesh, config.domain, config.weights, config.boundary_start);
    artifact.mesh = std::move(mesh);
    artifact.config_hash = config_hash(config);
    for (const std::string& w : artifact.chart.warnings) say(options, "warning: " + w);
    const std::filesystem::path file = options.chart.value_or(paths.chart);
    save_chart(file, artifact);
    say(options, "chart: " + std::to_string(artifact.chart.real_vertex_count) + " vertices, residual " +
                     std::to_string(artifact.chart.residual));
    return file;
}

std::filesystem::path run_plan(const ProjectConfig& config, const StageOptions& options) {
    config.validate(false);
    const ArtifactPaths paths(config.output_dir);
    const ChartArtifact chart = upstream_chart(config, paths, options);
    const double spacing = config.baseline_spacing_factor * config.env.footprint_radius;
    PathArtifact artifact;
    artifact.method = options.method;
    artifact.config_hash = config_hash(config);
    if (options.method == "zigzag") {
        ZigzagOptions z = config.zigzag;
        z.spacing = spacing;
        artifact.path = zigzag_path(chart.chart, z);
    } else if (options.method == "spiral") {
        SpiralOptions s = config.spiral;
        s.spacing = spacing;
        artifact.path = spiral_path(chart.chart, s);
    } else {
        throw Error(ErrorKind::invalid_argument, "unknown planning method '" + options.method + "'");
    }
    save_path(paths.path, artifact);
    say(options, options.method + ": " + std::to_string(artifact.path.points.size()) + " points");
    return paths.path;
}

std::filesystem::path run_train(const ProjectConfig& config, const StageOptions& options) {
    config.validate(false);
    const ArtifactPaths paths(config.output_dir);
    const ChartArtifact chart = upstream_chart(config, paths, options);
    const GridWorld world = make_grid_world(chart.chart, config.env.resolution);
    const std::uint64_t hash = config_hash(config);
    rl::SacAgent<float> agent(config.train.sac, stage_seed(config.seed, "agent"));
    std::ofstream log = open_text(paths.train_log);
    log << "# config_hash=" << hash_hex(hash) << '\n';
    std::vector<rl::TrainLogRow> rows;
    rl::TrainHooks hooks;
    hooks.on_log = [&](const rl::TrainLogRow& row) {
        rows.push_back(row);
        say(options, "step " + std::to_string(row.step) + " steps/episode " +
                         std::to_string(row.steps_per_episode) + " coverage " + std::to_string(row.coverage));
    };
    hooks.on_checkpoint = [&](long step) {
        rl::save_checkpoint(paths.checkpoint, agent,
                            rl::CheckpointHeader{rl::kCheckpointVersion, hash, static_cast<std::uint64_t>(step)});
    };
    rl::train(agent, world, config.env, config.train, hooks);
    rl::write_train_log_csv(log, rows);
    return paths.checkpoint;
}

std::filesystem::path run_rollout(const ProjectConfig& config, const StageOptions& options) {
    config.validate(false);
    const ArtifactPaths paths(config.output_dir);
    const ChartArtifact chart = upstream_chart(config, paths, options);
    const std::filesystem::path checkpoint = options.checkpoint.value_or(paths.checkpoint);
    require_artifact(checkpoint, "train");
    rl::SacAgent<float> agent(config.train.sac, stage_seed(config.seed, "agent"));
    std::optional<std::uint64_t> expected;
    if (!options.force) expected = config_hash(config);
    rl::load_checkpoint(checkpoint, agent, expected);
    const GridWorld world = make_grid_world(chart.chart, config.env.resolution);
    const std::uint64_t start = options.start_seed.value_or(stage_seed(config.seed, "rollout"));
    const rl::RolloutResult result = rl::rollout(
        rl::agent_policy(agent, options.deterministic, stage_seed(config.seed, "rollout-policy")), world,
        config.env, start);
    PathArtifact artifact{result.path, "sac", config_hash(config)};
    save_path(paths.path, artifact);
    std::ofstream trace = open_text(paths.trace);
    trace << "# config_hash=" << hash_hex(artifact.config_hash) << '\n';
    write_trace_csv(trace, result.trace);
    say(options, "rollout: " + std::to_string(result.trace.size() - 1) + " steps, coverage " +
                     std::to_string(result.coverage) + ", " + std::string(to_string(result.reason)));
    return paths.path;
}

std::filesystem::path run_lift(const ProjectConfig& config, const StageOptions& options) {
    config.validate(false);
    const ArtifactPaths paths(config.output_dir);
    const ChartArtifact chart = upstream_chart(config, paths, options);
    const PathArtifact path = upstream_path(config, paths, options.force);
    const auto waypoints = lift_path(path.path, chart.chart, chart.mesh, config.lift);
    save_waypoints(paths.waypoints, waypoints, config_hash(config));
    say(options, "lift: " + std::to_string(waypoints.size()) + " waypoints");
    return paths.waypoints;
}

std::filesystem::path run_evaluate(const ProjectConfig& config, const StageOptions& options) {
    config.validate(false);
    const ArtifactPaths paths(config.output_dir);
    const PathArtifact path = upstream_path(config, paths, options.force);
    const ChartArtifact chart = upstream_chart(config, paths, options);
    const auto waypoints = lift_path(path.path, chart.chart, chart.mesh, config.lift);
    const GridWorld world = make_grid_world(chart.chart, config.env.resolution);
    const PathReport report = evaluate_path(path.path, waypoints, world, config.env.footprint_radius);
    std::ofstream out = open_text(paths.report);
    out << report_to_json(report, path.method, config_hash(config)).dump(2) << '\n';
    say(options, "evaluate: length " + std::to_string(report.total_length) + " m, coverage " +
                     std::to_string(report.coverage_fraction) + ", S_dgamma " +
                     std::to_string(report.s_delta_gamma) + " rad");
    return paths.report;
}

std::filesystem::path run_render(const ProjectConfig& config, const StageOptions& options) {
    config.validate(false);
    const ArtifactPaths paths(config.output_dir);
    const ChartArtifact chart = upstream_chart(config, paths, options);
    GridWorld world = make_grid_world(chart.chart, config.env.resolution);
    UVPath path;
    if (std::filesystem::exists(paths.path)) {
        path = upstream_path(config, paths, options.force).path;
        stamp_polyline(world, path.points, config.env.footprint_radius);
    }
    std::ofstream out = open_text(paths.svg);
    out << render_svg(world, path);
    return paths.svg;
}

std::filesystem::path run_stage(Stage stage, const ProjectConfig& config, const StageOptions& options) {
    switch (stage) {
        case Stage::parameterize: return run_parameterize(config, options);
        case Stage::plan: return run_plan(config, options);
        case Stage::train: return run_train(config, options);
        case Stage::rollout: return run_rollout(config, options);
        case Stage::lift: return run_lift(config, options);
        case Stage::evaluate: return run_evaluate(config, options);
        case Stage::render: return run_render(config, options);
    }
    throw Error(ErrorKind::invalid_argument, "unknown stage");
}

std::vector<std::filesystem::path> run_pipeline(const ProjectConfig& config, const std::vector<Stage>& stages,
                                                const StageOptions& options) {
    std::vector<std::filesystem::path> out;
    for (Stage s : stages) out.push_back(run_stage(s, config, options));
    return out;
}

}  // namespace uvwipe::app
