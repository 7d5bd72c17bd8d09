#pragma once

#include "uvwipe/baselines.hpp"
#include "uvwipe/metrics.hpp"
#include "uvwipe/mesh.hpp"
#include "uvwipe/parameterization.hpp"
#include "uvwipe/path_lift.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace uvwipe::app {

// Artifact file names inside the output directory.
struct ArtifactPaths {
    std::filesystem::path chart, path, checkpoint, train_log, trace, waypoints, report, svg;

    explicit ArtifactPaths(const std::filesystem::path& dir);
};

struct ChartArtifact {
    UVChart chart;
    TriangleMesh mesh;  // the region the chart was solved on, holes unfilled
    std::uint64_t config_hash = 0;
};

nlohmann::json chart_to_json(const UVChart& chart, const TriangleMesh& mesh, std::uint64_t config_hash);
ChartArtifact chart_from_json(const nlohmann::json& j);
void save_chart(const std::filesystem::path& path, const ChartArtifact& artifact);
ChartArtifact load_chart(const std::filesystem::path& path);

struct PathArtifact {
    UVPath path;
    std::string method;
    std::uint64_t config_hash = 0;
};

void save_path(const std::filesystem::path& path, const PathArtifact& artifact);
PathArtifact load_path(const std::filesystem::path& path);

void save_waypoints(const std::filesystem::path& path, const std::vector<PosedWaypoint>& waypoints,
                    std::uint64_t config_hash);

nlohmann::json report_to_json(const PathReport& report, const std::string& method,
                              std::uint64_t config_hash);

// Reads the "# config_hash=<hex>" line that text artifacts start with.
std::uint64_t read_text_artifact_hash(const std::filesystem::path& path);

// Throws lineage_mismatch unless `found` equals `expected` or `force` is set.
void check_lineage(const std::filesystem::path& artifact, std::uint64_t found, std::uint64_t expected,
                   bool force);

void require_artifact(const std::filesystem::path& path, const std::string& produced_by);

}  // namespace uvwipe::app
