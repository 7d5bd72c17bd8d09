#pragma once

#include "uvwipe/geometry.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace uvwipe {

inline constexpr double kDegenerateAreaTolerance = 1e-12;

// Validated, immutable triangle mesh. Positions are in meters.
class TriangleMesh {
public:
    TriangleMesh() = default;

    // Validates indices, face areas, edge manifoldness and winding
    // consistency. Throws uvwipe::Error on violation.
    TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

    [[nodiscard]] const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }
    [[nodiscard]] const std::vector<Vec3>& face_normals() const noexcept { return face_normals_; }
    [[nodiscard]] const std::vector<double>& face_areas() const noexcept { return face_areas_; }
    [[nodiscard]] const std::vector<Vec3>& vertex_normals() const noexcept { return vertex_normals_; }

    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t face_count() const noexcept { return faces_.size(); }
    [[nodiscard]] double total_area() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
    std::vector<Vec3> face_normals_;
    std::vector<double> face_areas_;
    std::vector<Vec3> vertex_normals_;  // area-weighted, unit length
};

// Ordered ring of boundary vertices. cumulative_lengths has K + 1 entries:
// cumulative_lengths[i] is the chord length from vertex_indices[0] to
// vertex_indices[i], and the last entry is the closed perimeter.
struct BoundaryLoop {
    std::vector<int> vertex_indices;
    std::vector<double> cumulative_lengths;

    [[nodiscard]] std::size_t size() const noexcept { return vertex_indices.size(); }
    [[nodiscard]] double perimeter() const {
        return cumulative_lengths.empty() ? 0.0 : cumulative_lengths.back();
    }
};

// Builds a loop from an explicit vertex ring, computing chord lengths.
BoundaryLoop make_boundary_loop(std::span<const Vec3> positions, std::vector<int> ring);

// All boundary loops of the mesh, each oriented along the face winding
// (counterclockwise seen from the side the face normals point to) and
// rotated to start at its lowest vertex index.
std::vector<BoundaryLoop> find_boundary_loops(const TriangleMesh& mesh);

// The single boundary loop of a disk-topology mesh. The loop starts at
// `start_vertex` when given, otherwise at the lowest-index boundary vertex.
BoundaryLoop extract_boundary(const TriangleMesh& mesh,
                              std::optional<int> start_vertex = std::nullopt);

// Rotates a loop so it begins at `start_vertex`, recomputing lengths.
BoundaryLoop rotate_loop(const BoundaryLoop& loop, std::span<const Vec3> positions,
                         int start_vertex);

struct Submesh {
    TriangleMesh mesh;
    std::vector<int> original_vertex;  // new vertex index -> parent vertex index
    std::vector<int> original_face;    // new face index -> parent face index
};

// Edge-connected face subset with compacted vertex indices. Vertices keep
// their relative parent order.
Submesh extract_region(const TriangleMesh& mesh, std::span<const int> face_ids);

// Result of closing interior holes with one centroid vertex per hole.
// Added vertices follow the original ones; added faces follow the original
// faces, so index ranges [0, original_face_count) are untouched.
struct FilledMesh {
    TriangleMesh mesh;
    BoundaryLoop outer;
    std::size_t original_vertex_count = 0;
    std::size_t original_face_count = 0;
    std::vector<BoundaryLoop> holes;
};

// Picks the loop with the largest perimeter as the outer boundary and fans
// every other loop closed. Meshes with a single loop are returned unchanged.
FilledMesh fill_holes(const TriangleMesh& mesh, std::optional<int> start_vertex = std::nullopt);

}  // namespace uvwipe
