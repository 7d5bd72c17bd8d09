#pragma once

#include "uvwipe/app/artifacts.hpp"
#include "uvwipe/app/config.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace uvwipe::app {

enum class Stage { parameterize, plan, train, rollout, lift, evaluate, render };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

struct StageOptions {
    bool force = false;          // accept upstream artifacts from another config
    std::string method = "zigzag";  // plan: zigzag or spiral
    std::optional<std::filesystem::path> chart;       // defaults to the output dir
    std::optional<std::filesystem::path> checkpoint;  // rollout: defaults to the output dir
    bool deterministic = true;   // rollout
    std::optional<std::uint64_t> start_seed;  // rollout: defaults to a stage seed
    std::function<void(const std::string&)> progress;  // optional status lines
};

// Each stage reads its inputs from, and writes its artifact into, the
// configured output directory, returning the path of the main artifact.
std::filesystem::path run_parameterize(const ProjectConfig& config, const StageOptions& options = {});
std::filesystem::path run_plan(const ProjectConfig& config, const StageOptions& options = {});
std::filesystem::path run_train(const ProjectConfig& config, const StageOptions& options = {});
std::filesystem::path run_rollout(const ProjectConfig& config, const StageOptions& options = {});
std::filesystem::path run_lift(const ProjectConfig& config, const StageOptions& options = {});
std::filesystem::path run_evaluate(const ProjectConfig& config, const StageOptions& options = {});
std::filesystem::path run_render(const ProjectConfig& config, const StageOptions& options = {});

std::filesystem::path run_stage(Stage stage, const ProjectConfig& config, const StageOptions& options = {});

// Runs the stages in order and stops at the first failure, which propagates.
std::vector<std::filesystem::path> run_pipeline(const ProjectConfig& config, const std::vector<Stage>& stages,
                                                const StageOptions& options = {});

}  // namespace uvwipe::app
