#pragma once

#include "uvwipe/baselines.hpp"
#include "uvwipe/coverage_env.hpp"
#include "uvwipe/parameterization.hpp"
#include "uvwipe/path_lift.hpp"
#include "uvwipe/rl/trainer.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace uvwipe::app {

struct ProjectConfig {
    std::filesystem::path mesh;
    std::filesystem::path region;  // face selection; empty means the whole mesh
    std::filesystem::path output_dir = "out";
    DomainKind domain = DomainKind::square;
    WeightScheme weights = WeightScheme::cotangent;
    std::optional<int> boundary_start;
    std::uint64_t seed = 0;

    EnvConfig env;
    rl::TrainConfig train;
    ZigzagOptions zigzag;
    SpiralOptions spiral;
    // Row or ring spacing as a multiple of the footprint radius.
    double baseline_spacing_factor = 1.8;
    LiftOptions lift;

    // Paths are resolved against `base` when relative.
    void resolve_paths(const std::filesystem::path& base);
    void validate(bool require_inputs = true) const;
};

nlohmann::json to_json(const ProjectConfig& config);
ProjectConfig config_from_json(const nlohmann::json& j);
ProjectConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ProjectConfig& config);

// FNV-1a over the canonical JSON of the settings that shape artifacts; the
// seed, output directory and checkpoint cadence are left out.
std::uint64_t config_hash(const ProjectConfig& config);
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hash_hex(std::uint64_t hash);
std::uint64_t parse_hash_hex(std::string_view text);

// Stable per-stage seed derived from the project seed.
std::uint64_t stage_seed(std::uint64_t seed, std::string_view stage);

}  // namespace uvwipe::app
