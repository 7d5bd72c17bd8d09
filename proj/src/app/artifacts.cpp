#include "uvwipe/app/artifacts.hpp"
#include "uvwipe/app/config.hpp"
#include "uvwipe/error.hpp"

#include <fstream>
#include <sstream>

namespace uvwipe::app {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::missing_artifact, "cannot open '" + path.string() + "'");
    return in;
}

json vec3_list(const std::vector<Vec3>& v) {
    json out = json::array();
    for (const Vec3& p : v) out.push_back({p.x(), p.y(), p.z()});
    return out;
}

json face_list(const std::vector<Face>& faces) {
    json out = json::array();
    for (const Face& f : faces) out.push_back({f[0], f[1], f[2]});
    return out;
}

template <typename T>
T field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::parse, std::string("chart artifact lacks '") + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorKind::parse, std::string("chart artifact field '") + key + "' is malformed");
    }
}

std::vector<Face> faces_of(const json& j, const char* key) {
    std::vector<Face> out;
    for (const auto& f : field<std::vector<std::array<int, 3>>>(j, key)) out.push_back(Face{f[0], f[1], f[2]});
    return out;
}

}  // namespace

ArtifactPaths::ArtifactPaths(const std::filesystem::path& dir)
    : chart(dir / "chart.json"),
      path(dir / "path.csv"),
      checkpoint(dir / "checkpoint.bin"),
      train_log(dir / "train_log.csv"),
      trace(dir / "trace.csv"),
      waypoints(dir / "waypoints.csv"),
      report(dir / "report.json"),
      svg(dir / "map.svg") {}

json chart_to_json(const UVChart& chart, const TriangleMesh& mesh, std::uint64_t config_hash) {
    json j;
    j["config_hash"] = hash_hex(config_hash);
    j["domain"] = std::string(to_string(chart.domain));
    j["weights_requested"] = std::string(to_string(chart.weights_requested));
    j["weights_used"] = std::string(to_string(chart.weights_used));
    json uv = json::array();
    for (const Vec2& p : chart.uv) uv.push_back({p.x(), p.y()});
    j["uv"] = uv;
    j["faces"] = face_list(chart.faces);
    j["real_vertex_count"] = chart.real_vertex_count;
    j["real_face_count"] = chart.real_face_count;
    j["boundary_vertices"] = chart.boundary_vertices;
    j["boundary_params"] = chart.boundary_params;
    j["face_area_3d"] = chart.face_area_3d;
    j["residual"] = chart.residual;
    j["warnings"] = chart.warnings;
    j["mesh"] = {{"vertices", vec3_list(mesh.vertices())}, {"faces", face_list(mesh.faces())}};
    return j;
}

ChartArtifact chart_from_json(const json& j) {
    ChartArtifact a;
    a.config_hash = parse_hash_hex(field<std::string>(j, "config_hash"));
    UVChart& c = a.chart;
    c.domain = parse_domain_kind(field<std::string>(j, "domain"));
    c.weights_requested = parse_weight_scheme(field<std::string>(j, "weights_requested"));
    c.weights_used = parse_weight_scheme(field<std::string>(j, "weights_used"));
    for (const auto& p : field<std::vector<std::array<double, 2>>>(j, "uv")) c.uv.emplace_back(p[0], p[1]);
    c.faces = faces_of(j, "faces");
    c.real_vertex_count = field<std::size_t>(j, "real_vertex_count");
    c.real_face_count = field<std::size_t>(j, "real_face_count");
    c.boundary_vertices = field<std::vector<int>>(j, "boundary_vertices");
    c.boundary_params = field<std::vector<double>>(j, "boundary_params");
    c.face_area_3d = field<std::vector<double>>(j, "face_area_3d");
    c.residual = field<double>(j, "residual");
    c.warnings = field<std::vector<std::string>>(j, "warnings");
    const json& m = j.at("mesh");
    std::vector<Vec3> vertices;
    for (const auto& p : field<std::vector<std::array<double, 3>>>(m, "vertices")) {
        vertices.emplace_back(p[0], p[1], p[2]);
    }
    a.mesh = TriangleMesh(std::move(vertices), faces_of(m, "faces"));
    for (const Face& f : c.faces) {
        for (int v : f) {
            if (v < 0 || static_cast<std::size_t>(v) >= c.uv.size()) {
                throw Error(ErrorKind::parse, "chart artifact face references a missing vertex");
            }
        }
    }
    if (c.real_face_count > c.faces.size() || c.real_vertex_count > c.uv.size() ||
        a.mesh.face_count() != c.real_face_count || a.mesh.vertex_count() != c.real_vertex_count) {
        throw Error(ErrorKind::shape_mismatch, "chart artifact counts are inconsistent");
    }
    c.rebuild_index();
    return a;
}

void save_chart(const std::filesystem::path& path, const ChartArtifact& artifact) {
    auto out = open_out(path);
    out << chart_to_json(artifact.chart, artifact.mesh, artifact.config_hash).dump() << '\n';
}

ChartArtifact load_chart(const std::filesystem::path& path) {
    require_artifact(path, "parameterize");
    auto in = open_in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, "chart '" + path.string() + "': " + e.what());
    }
    return chart_from_json(j);
}

void save_path(const std::filesystem::path& path, const PathArtifact& artifact) {
    auto out = open_out(path);
    out << "# config_hash=" << hash_hex(artifact.config_hash) << " method=" << artifact.method << '\n';
    write_uv_path_csv(out, artifact.path);
}

PathArtifact load_path(const std::filesystem::path& path) {
    require_artifact(path, "plan or rollout");
    PathArtifact a;
    a.config_hash = read_text_artifact_hash(path);
    auto in = open_in(path);
    std::string first;
    std::getline(in, first);
    if (const auto pos = first.find("method="); pos != std::string::npos) {
        a.method = first.substr(pos + 7);
    }
    a.path = read_uv_path_csv(in);
    return a;
}

void save_waypoints(const std::filesystem::path& path, const std::vector<PosedWaypoint>& waypoints,
                    std::uint64_t config_hash) {
    auto out = open_out(path);
    out << "# config_hash=" << hash_hex(config_hash) << '\n';
    write_waypoints_csv(out, waypoints);
}

json report_to_json(const PathReport& report, const std::string& method, std::uint64_t config_hash) {
    return {
        {"config_hash", hash_hex(config_hash)},
        {"method", method},
        {"total_length", report.total_length},
        {"coverage_fraction", report.coverage_fraction},
        {"s_delta_gamma", report.s_delta_gamma},
        {"step_count", report.step_count},
    };
}

std::uint64_t read_text_artifact_hash(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string first;
    std::getline(in, first);
    const std::string key = "# config_hash=";
    if (first.rfind(key, 0) != 0 || first.size() < key.size() + 16) {
        throw Error(ErrorKind::parse, "'" + path.string() + "' does not start with a config hash line");
    }
    return parse_hash_hex(std::string_view(first).substr(key.size(), 16));
}

void check_lineage(const std::filesystem::path& artifact, std::uint64_t found, std::uint64_t expected,
                   bool force) {
    if (found != expected && !force) {
        throw Error(ErrorKind::lineage_mismatch, "'" + artifact.string() + "' was produced under config " +
                                                     hash_hex(found) + ", current config is " +
                                                     hash_hex(expected) + " (use --force to override)");
    }
}

void require_artifact(const std::filesystem::path& path, const std::string& produced_by) {
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::missing_artifact,
                    "missing artifact '" + path.string() + "'; run " + produced_by + " first");
    }
}

}  // namespace uvwipe::app
