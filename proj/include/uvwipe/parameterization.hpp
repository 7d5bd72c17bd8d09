#pragma once

#include "uvwipe/geometry.hpp"
#include "uvwipe/mesh.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uvwipe {

enum class DomainKind { square, disk };
enum class WeightScheme { uniform, cotangent };

std::string_view to_string(DomainKind kind);
std::string_view to_string(WeightScheme scheme);
DomainKind parse_domain_kind(std::string_view text);
WeightScheme parse_weight_scheme(std::string_view text);

// Boundary parameters t_i = (chord length from v_0 to v_i) / perimeter.
// Requires K >= 3 distinct vertices and no zero-length edge.
std::vector<double> chordal_parameterize(const BoundaryLoop& loop);

// Piecewise-linear walk around [-1,1]^2, counterclockwise from (-1,-1).
Vec2 map_boundary_square(double t);
// (cos 2 pi t, sin 2 pi t).
Vec2 map_boundary_circle(double t);
Vec2 map_boundary(DomainKind kind, double t);

struct UvLocation {
    int face = -1;
    std::array<double, 3> bary{};
};

inline constexpr double kPointInTriangleTolerance = 1e-12;

// Uniform bin grid over the UV bounding box; each bin lists the faces whose
// UV bounding box overlaps it, in ascending face order.
class UvSpatialIndex {
public:
    UvSpatialIndex() = default;
    UvSpatialIndex(std::span<const Vec2> uv, std::span<const Face> faces, int bins = 64);

    // First (lowest-index) face containing p within the edge tolerance.
    [[nodiscard]] std::optional<UvLocation> locate(const Vec2& p, std::span<const Vec2> uv,
                                                   std::span<const Face> faces) const;

    [[nodiscard]] int bins() const noexcept { return bins_; }

private:
    int bins_ = 0;
    Vec2 lo_ = Vec2::Zero();
    Vec2 hi_ = Vec2::Zero();
    std::vector<std::vector<int>> cells_;
};

// Fixed-boundary UV map of a disk-topology patch. uv and faces may carry
// extra vertices/faces used to close interior holes; those come after the
// real ones (see real_vertex_count / real_face_count).
struct UVChart {
    DomainKind domain = DomainKind::square;
    WeightScheme weights_requested = WeightScheme::cotangent;
    WeightScheme weights_used = WeightScheme::cotangent;
    std::vector<Vec2> uv;
    std::vector<Face> faces;
    std::size_t real_vertex_count = 0;
    std::size_t real_face_count = 0;
    std::vector<int> boundary_vertices;
    std::vector<double> boundary_params;
    std::vector<double> face_area_3d;  // 3D area of each real face, m^2
    double residual = 0.0;
    std::vector<std::string> warnings;
    UvSpatialIndex index;

    [[nodiscard]] std::optional<UvLocation> locate(const Vec2& p) const {
        return index.locate(p, uv, faces);
    }
    [[nodiscard]] bool contains(const Vec2& p) const { return locate(p).has_value(); }
    [[nodiscard]] bool is_hole_face(int face) const {
        return static_cast<std::size_t>(face) >= real_face_count;
    }
    void rebuild_index(int bins = 64) { index = UvSpatialIndex(uv, faces, bins); }
};

struct HarmonicOptions {
    // Interior-vertex count at or above which the iterative solver is used.
    std::size_t direct_solver_limit = 50000;
    double cg_tolerance = 1e-10;
    int spatial_bins = 64;
};

// Solves L * uv = 0 for the interior vertices with the boundary pinned by the
// chordal parameterization of `loop`. Cotangent weights fall back to uniform
// when any UV triangle comes out flipped.
UVChart harmonic_solve(const TriangleMesh& mesh, const BoundaryLoop& loop, DomainKind domain,
                       WeightScheme weights, const HarmonicOptions& options = {});

// Closes interior holes virtually, then runs harmonic_solve.
UVChart parameterize(const TriangleMesh& region, DomainKind domain, WeightScheme weights,
                     std::optional<int> start_vertex = std::nullopt,
                     const HarmonicOptions& options = {});

// Per-edge weights w_ij as used by the solve; symmetric.
struct EdgeWeight {
    int i;
    int j;
    double w;
};
std::vector<EdgeWeight> laplacian_weights(const TriangleMesh& mesh, WeightScheme scheme);

// max_i |uv_i - sum_j w_ij uv_j / sum_j w_ij| over non-boundary vertices.
double harmonic_residual(const TriangleMesh& mesh, std::span<const Vec2> uv,
                         std::span<const int> boundary_vertices, WeightScheme scheme);

struct SurfacePoint {
    Vec3 position;
    Vec3 normal;
    int face = -1;
    std::array<double, 3> bary{};
};

// S(u, v): barycentric interpolation on the 3D triangle matching the UV
// triangle that contains (u, v).
SurfacePoint surface_point(const UVChart& chart, const TriangleMesh& mesh, double u, double v);

Vec2 uv_of_point(const UVChart& chart, const TriangleMesh& mesh, int face_id,
                 const std::array<double, 3>& bary);

}  // namespace uvwipe
