#include "uvwipe/mesh.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace uvwipe {

namespace {

std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    const int n = static_cast<int>(vertices_.size());
    face_normals_.reserve(faces_.size());
    face_areas_.reserve(faces_.size());

    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const Face& face = faces_[f];
        for (int idx : face) {
            if (idx < 0 || idx >= n) {
                throw Error(ErrorKind::parse, "face " + std::to_string(f) +
                                                  " references vertex " + std::to_string(idx) +
                                                  " out of range");
            }
        }
        const Vec3 cross = (vertices_[face[1]] - vertices_[face[0]])
                               .cross(vertices_[face[2]] - vertices_[face[0]]);
        const double area = 0.5 * cross.norm();
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2] ||
            area <= kDegenerateAreaTolerance) {
            throw Error(ErrorKind::degenerate_face,
                        "face " + std::to_string(f) + " is degenerate (area " +
                            std::to_string(area) + ")");
        }
        face_areas_.push_back(area);
        face_normals_.push_back(cross / cross.norm());
    }

    // Undirected edge use count and directed edge uniqueness.
    std::unordered_map<std::uint64_t, int> undirected;
    std::unordered_set<std::uint64_t> directed;
    undirected.reserve(faces_.size() * 3);
    directed.reserve(faces_.size() * 3);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces_[f][k];
            const int b = faces_[f][(k + 1) % 3];
            if (++undirected[edge_key(std::min(a, b), std::max(a, b))] > 2) {
                throw Error(ErrorKind::non_manifold, "edge (" + std::to_string(a) + ", " +
                                                         std::to_string(b) +
                                                         ") is shared by more than two faces");
            }
        }
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces_[f][k];
            const int b = faces_[f][(k + 1) % 3];
            if (!directed.insert(edge_key(a, b)).second) {
                throw Error(ErrorKind::inconsistent_winding,
                            "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                ") is traversed in the same direction by two faces");
            }
        }
    }

    vertex_normals_.assign(vertices_.size(), Vec3::Zero());
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        for (int idx : faces_[f]) {
            vertex_normals_[idx] += face_areas_[f] * face_normals_[f];
        }
    }
    for (Vec3& vn : vertex_normals_) {
        const double len = vn.norm();
        if (len > 0.0) {
            vn /= len;
        }
    }
}

double TriangleMesh::total_area() const {
    return std::accumulate(face_areas_.begin(), face_areas_.end(), 0.0);
}

BoundaryLoop make_boundary_loop(std::span<const Vec3> positions, std::vector<int> ring) {
    std::unordered_set<int> seen;
    for (int v : ring) {
        if (v < 0 || static_cast<std::size_t>(v) >= positions.size()) {
            throw Error(ErrorKind::invalid_argument,
                        "boundary vertex " + std::to_string(v) + " out of range");
        }
        if (!seen.insert(v).second) {
            throw Error(ErrorKind::non_simple_boundary,
                        "boundary loop repeats vertex " + std::to_string(v));
        }
    }
    BoundaryLoop loop;
    loop.cumulative_lengths.reserve(ring.size() + 1);
    loop.cumulative_lengths.push_back(0.0);
    for (std::size_t i = 1; i <= ring.size() && !ring.empty(); ++i) {
        const Vec3& a = positions[ring[i - 1]];
        const Vec3& b = positions[ring[i % ring.size()]];
        loop.cumulative_lengths.push_back(loop.cumulative_lengths.back() + (b - a).norm());
    }
    loop.vertex_indices = std::move(ring);
    return loop;
}

std::vector<BoundaryLoop> find_boundary_loops(const TriangleMesh& mesh) {
    std::unordered_set<std::uint64_t> directed;
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            directed.insert(edge_key(f[k], f[(k + 1) % 3]));
        }
    }
    // Boundary half-edges are those without a twin; ordered map keeps the
    // traversal independent of hash order.
    std::map<int, int> next;
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 3];
            if (!directed.contains(edge_key(b, a))) {
                if (!next.emplace(a, b).second) {
                    throw Error(ErrorKind::non_simple_boundary,
                                "vertex " + std::to_string(a) +
                                    " lies on more than one boundary edge pair");
                }
            }
        }
    }

    std::vector<BoundaryLoop> loops;
    std::unordered_set<int> visited;
    for (const auto& [start, unused] : next) {
        if (visited.contains(start)) {
            continue;
        }
        std::vector<int> ring;
        int v = start;
        do {
            if (!visited.insert(v).second) {
                throw Error(ErrorKind::non_simple_boundary, "boundary loop is not simple");
            }
            ring.push_back(v);
            const auto it = next.find(v);
            if (it == next.end()) {
                throw Error(ErrorKind::non_simple_boundary, "boundary loop is not closed");
            }
            v = it->second;
        } while (v != start);
        loops.push_back(make_boundary_loop(mesh.vertices(), std::move(ring)));
    }
    return loops;
}

BoundaryLoop rotate_loop(const BoundaryLoop& loop, std::span<const Vec3> positions,
                         int start_vertex) {
    const auto it = std::find(loop.vertex_indices.begin(), loop.vertex_indices.end(), start_vertex);
    if (it == loop.vertex_indices.end()) {
        throw Error(ErrorKind::invalid_argument,
                    "start vertex " + std::to_string(start_vertex) + " is not on the boundary");
    }
    std::vector<int> ring(loop.vertex_indices.begin(), loop.vertex_indices.end());
    std::rotate(ring.begin(), ring.begin() + (it - loop.vertex_indices.begin()), ring.end());
    return make_boundary_loop(positions, std::move(ring));
}

BoundaryLoop extract_boundary(const TriangleMesh& mesh, std::optional<int> start_vertex) {
    auto loops = find_boundary_loops(mesh);
    if (loops.empty()) {
        throw Error(ErrorKind::no_boundary, "no boundary: mesh is closed");
    }
    if (loops.size() > 1) {
        throw Error(ErrorKind::multiple_boundaries,
                    "multiple boundary loops (" + std::to_string(loops.size()) +
                        "): mesh is not disk-homeomorphic");
    }
    if (start_vertex) {
        return rotate_loop(loops.front(), mesh.vertices(), *start_vertex);
    }
    return std::move(loops.front());
}

Submesh extract_region(const TriangleMesh& mesh, std::span<const int> face_ids) {
    if (face_ids.empty()) {
        throw Error(ErrorKind::empty_selection, "empty face selection");
    }
    std::vector<int> selected(face_ids.begin(), face_ids.end());
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    for (int f : selected) {
        if (f < 0 || static_cast<std::size_t>(f) >= mesh.face_count()) {
            throw Error(ErrorKind::invalid_argument, "face id " + std::to_string(f) + " out of range");
        }
    }

    // Edge adjacency within the selection.
    std::unordered_map<std::uint64_t, std::vector<int>> edge_faces;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const Face& face = mesh.faces()[selected[i]];
        for (int k = 0; k < 3; ++k) {
            const int a = face[k];
            const int b = face[(k + 1) % 3];
            edge_faces[edge_key(std::min(a, b), std::max(a, b))].push_back(static_cast<int>(i));
        }
    }
    std::vector<char> reached(selected.size(), 0);
    std::queue<int> frontier;
    frontier.push(0);
    reached[0] = 1;
    std::size_t reached_count = 1;
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop();
        const Face& face = mesh.faces()[selected[i]];
        for (int k = 0; k < 3; ++k) {
            const int a = face[k];
            const int b = face[(k + 1) % 3];
            for (int j : edge_faces[edge_key(std::min(a, b), std::max(a, b))]) {
                if (!reached[j]) {
                    reached[j] = 1;
                    ++reached_count;
                    frontier.push(j);
                }
            }
        }
    }
    if (reached_count != selected.size()) {
        throw Error(ErrorKind::disconnected_selection,
                    "face selection is not edge-connected");
    }

    std::vector<int> used;
    for (int f : selected) {
        used.insert(used.end(), mesh.faces()[f].begin(), mesh.faces()[f].end());
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::unordered_map<int, int> remap;
    std::vector<Vec3> vertices;
    vertices.reserve(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        remap[used[i]] = static_cast<int>(i);
        vertices.push_back(mesh.vertices()[used[i]]);
    }
    std::vector<Face> faces;
    faces.reserve(selected.size());
    for (int f : selected) {
        const Face& src = mesh.faces()[f];
        faces.push_back({remap[src[0]], remap[src[1]], remap[src[2]]});
    }
    return Submesh{TriangleMesh(std::move(vertices), std::move(faces)), std::move(used),
                   std::move(selected)};
}

FilledMesh fill_holes(const TriangleMesh& mesh, std::optional<int> start_vertex) {
    auto loops = find_boundary_loops(mesh);
    if (loops.empty()) {
        throw Error(ErrorKind::no_boundary, "no boundary: mesh is closed");
    }
    std::size_t outer_idx = 0;
    for (std::size_t i = 1; i < loops.size(); ++i) {
        if (loops[i].perimeter() > loops[outer_idx].perimeter()) {
            outer_idx = i;
        }
    }

    FilledMesh result;
    result.original_vertex_count = mesh.vertex_count();
    result.original_face_count = mesh.face_count();
    result.outer = start_vertex ? rotate_loop(loops[outer_idx], mesh.vertices(), *start_vertex)
                                : loops[outer_idx];
    if (loops.size() == 1) {
        result.mesh = mesh;
        return result;
    }

    std::vector<Vec3> vertices = mesh.vertices();
    std::vector<Face> faces = mesh.faces();
    for (std::size_t i = 0; i < loops.size(); ++i) {
        if (i == outer_idx) {
            continue;
        }
        const auto& ring = loops[i].vertex_indices;
        Vec3 centroid = Vec3::Zero();
        for (int v : ring) {
            centroid += mesh.vertices()[v];
        }
        centroid /= static_cast<double>(ring.size());
        const int c = static_cast<int>(vertices.size());
        vertices.push_back(centroid);
        // The boundary half-edge a->b belongs to a real face, so the filling
        // face must traverse b->a.
        for (std::size_t k = 0; k < ring.size(); ++k) {
            const int a = ring[k];
            const int b = ring[(k + 1) % ring.size()];
            faces.push_back({b, a, c});
        }
        result.holes.push_back(loops[i]);
    }
    result.mesh = TriangleMesh(std::move(vertices), std::move(faces));
    return result;
}

}  // namespace uvwipe
