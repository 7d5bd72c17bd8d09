#include "uvwipe/parameterization.hpp"
#include "uvwipe/error.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_set>

namespace uvwipe {

std::string_view to_string(DomainKind kind) {
    return kind == DomainKind::square ? "square" : "circle";
}

std::string_view to_string(WeightScheme scheme) {
    return scheme == WeightScheme::uniform ? "uniform" : "cotangent";
}

DomainKind parse_domain_kind(std::string_view text) {
    if (text == "square") {
        return DomainKind::square;
    }
    if (text == "circle" || text == "disk") {
        return DomainKind::disk;
    }
    throw Error(ErrorKind::invalid_argument, "unknown domain '" + std::string(text) + "'");
}

WeightScheme parse_weight_scheme(std::string_view text) {
    if (text == "uniform") {
        return WeightScheme::uniform;
    }
    if (text == "cotangent") {
        return WeightScheme::cotangent;
    }
    throw Error(ErrorKind::invalid_argument, "unknown weight scheme '" + std::string(text) + "'");
}

std::vector<double> chordal_parameterize(const BoundaryLoop& loop) {
    const std::size_t k = loop.vertex_indices.size();
    if (k < 3) {
        throw Error(ErrorKind::invalid_argument, "boundary loop needs at least 3 vertices");
    }
    if (loop.cumulative_lengths.size() != k + 1) {
        throw Error(ErrorKind::invalid_argument, "boundary loop lengths are inconsistent");
    }
    std::unordered_set<int> seen;
    for (int v : loop.vertex_indices) {
        if (!seen.insert(v).second) {
            throw Error(ErrorKind::non_simple_boundary,
                        "boundary loop repeats vertex " + std::to_string(v));
        }
    }
    const double perimeter = loop.cumulative_lengths[k];
    std::vector<double> t(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(loop.cumulative_lengths[i + 1] > loop.cumulative_lengths[i])) {
            throw Error(ErrorKind::invalid_argument,
                        "zero-length boundary edge after vertex " +
                            std::to_string(loop.vertex_indices[i]));
        }
        t[i] = loop.cumulative_lengths[i] / perimeter;
    }
    return t;
}

Vec2 map_boundary_square(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorKind::invalid_argument, "boundary parameter outside [0, 1]");
    }
    if (t < 0.25) {
        return {8.0 * t - 1.0, -1.0};
    }
    if (t < 0.5) {
        return {1.0, 8.0 * t - 3.0};
    }
    if (t < 0.75) {
        return {5.0 - 8.0 * t, 1.0};
    }
    return {-1.0, 7.0 - 8.0 * t};
}

Vec2 map_boundary_circle(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorKind::invalid_argument, "boundary parameter outside [0, 1]");
    }
    const double angle = kTwoPi * t;
    return {std::cos(angle), std::sin(angle)};
}

Vec2 map_boundary(DomainKind kind, double t) {
    return kind == DomainKind::square ? map_boundary_square(t) : map_boundary_circle(t);
}

// ---------------------------------------------------------------------------
// Spatial index
// ---------------------------------------------------------------------------

UvSpatialIndex::UvSpatialIndex(std::span<const Vec2> uv, std::span<const Face> faces, int bins)
    : bins_(bins) {
    if (bins <= 0 || uv.empty()) {
        bins_ = 0;
        return;
    }
    lo_ = uv[0];
    hi_ = uv[0];
    for (const Vec2& p : uv) {
        lo_ = lo_.cwiseMin(p);
        hi_ = hi_.cwiseMax(p);
    }
    cells_.assign(static_cast<std::size_t>(bins_) * bins_, {});
    const Vec2 extent = (hi_ - lo_).cwiseMax(Vec2::Constant(1e-300));
    auto bin_of = [&](double x, double lo, double ext) {
        const int b = static_cast<int>(std::floor((x - lo) / ext * bins_));
        return std::clamp(b, 0, bins_ - 1);
    };
    for (std::size_t f = 0; f < faces.size(); ++f) {
        Vec2 flo = uv[faces[f][0]];
        Vec2 fhi = flo;
        for (int k = 1; k < 3; ++k) {
            flo = flo.cwiseMin(uv[faces[f][k]]);
            fhi = fhi.cwiseMax(uv[faces[f][k]]);
        }
        // Pad by the point-in-triangle tolerance so edge hits are binned.
        const double pad = 1e-9;
        const int x0 = bin_of(flo.x() - pad, lo_.x(), extent.x());
        const int x1 = bin_of(fhi.x() + pad, lo_.x(), extent.x());
        const int y0 = bin_of(flo.y() - pad, lo_.y(), extent.y());
        const int y1 = bin_of(fhi.y() + pad, lo_.y(), extent.y());
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                cells_[static_cast<std::size_t>(y) * bins_ + x].push_back(static_cast<int>(f));
            }
        }
    }
}

std::optional<UvLocation> UvSpatialIndex::locate(const Vec2& p, std::span<const Vec2> uv,
                                                 std::span<const Face> faces) const {
    if (bins_ == 0 || !std::isfinite(p.x()) || !std::isfinite(p.y())) {
        return std::nullopt;
    }
    const double slack = 1e-9;
    if (p.x() < lo_.x() - slack || p.y() < lo_.y() - slack || p.x() > hi_.x() + slack ||
        p.y() > hi_.y() + slack) {
        return std::nullopt;
    }
    const Vec2 extent = (hi_ - lo_).cwiseMax(Vec2::Constant(1e-300));
    const int bx = std::clamp(static_cast<int>(std::floor((p.x() - lo_.x()) / extent.x() * bins_)),
                              0, bins_ - 1);
    const int by = std::clamp(static_cast<int>(std::floor((p.y() - lo_.y()) / extent.y() * bins_)),
                              0, bins_ - 1);
    for (int f : cells_[static_cast<std::size_t>(by) * bins_ + bx]) {
        const Face& face = faces[f];
        UvLocation loc;
        if (!barycentric(p, uv[face[0]], uv[face[1]], uv[face[2]], loc.bary)) {
            continue;
        }
        if (loc.bary[0] >= -kPointInTriangleTolerance && loc.bary[1] >= -kPointInTriangleTolerance &&
            loc.bary[2] >= -kPointInTriangleTolerance) {
            loc.face = f;
            return loc;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Harmonic map
// ---------------------------------------------------------------------------

std::vector<EdgeWeight> laplacian_weights(const TriangleMesh& mesh, WeightScheme scheme) {
    std::map<std::pair<int, int>, double> acc;
    const auto& p = mesh.vertices();
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            const int i = f[k];
            const int j = f[(k + 1) % 3];
            const int o = f[(k + 2) % 3];
            const auto key = std::make_pair(std::min(i, j), std::max(i, j));
            if (scheme == WeightScheme::uniform) {
                acc[key] = 1.0;
            } else {
                // Half the cotangent of the angle opposite edge (i, j).
                const Vec3 a = p[i] - p[o];
                const Vec3 b = p[j] - p[o];
                acc[key] += 0.5 * a.dot(b) / a.cross(b).norm();
            }
        }
    }
    std::vector<EdgeWeight> out;
    out.reserve(acc.size());
    for (const auto& [key, w] : acc) {
        out.push_back({key.first, key.second, w});
    }
    return out;
}

double harmonic_residual(const TriangleMesh& mesh, std::span<const Vec2> uv,
                         std::span<const int> boundary_vertices, WeightScheme scheme) {
    const std::size_t n = mesh.vertex_count();
    std::vector<Vec2> weighted_sum(n, Vec2::Zero());
    std::vector<double> weight_total(n, 0.0);
    for (const EdgeWeight& e : laplacian_weights(mesh, scheme)) {
        weighted_sum[e.i] += e.w * uv[e.j];
        weighted_sum[e.j] += e.w * uv[e.i];
        weight_total[e.i] += e.w;
        weight_total[e.j] += e.w;
    }
    std::vector<char> pinned(n, 0);
    for (int b : boundary_vertices) {
        pinned[b] = 1;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (pinned[i] || weight_total[i] == 0.0) {
            continue;
        }
        const Vec2 r = uv[i] - weighted_sum[i] / weight_total[i];
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

std::vector<Vec2> solve_interior(const TriangleMesh& mesh, std::span<const int> boundary,
                                 std::span<const Vec2> boundary_uv, WeightScheme scheme,
                                 const HarmonicOptions& options) {
    const std::size_t n = mesh.vertex_count();
    std::vector<Vec2> uv(n, Vec2::Zero());
    std::vector<int> row(n, -1);
    std::vector<char> pinned(n, 0);
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        pinned[boundary[k]] = 1;
        uv[boundary[k]] = boundary_uv[k];
    }
    int unknowns = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!pinned[i]) {
            row[i] = unknowns++;
        }
    }
    if (unknowns == 0) {
        return uv;
    }

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(unknowns, 2);
    std::vector<double> diag(unknowns, 0.0);
    for (const EdgeWeight& e : laplacian_weights(mesh, scheme)) {
        const int ends[2] = {e.i, e.j};
        for (int s = 0; s < 2; ++s) {
            const int a = ends[s];
            const int b = ends[1 - s];
            if (pinned[a]) {
                continue;
            }
            diag[row[a]] += e.w;
            if (pinned[b]) {
                rhs.row(row[a]) += e.w * uv[b].transpose();
            } else {
                triplets.emplace_back(row[a], row[b], -e.w);
            }
        }
    }
    for (int r = 0; r < unknowns; ++r) {
        if (diag[r] == 0.0) {
            throw Error(ErrorKind::singular_system, "isolated interior vertex in harmonic system");
        }
        triplets.emplace_back(r, r, diag[r]);
    }
    SparseMatrix a(unknowns, unknowns);
    a.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::MatrixX2d x;
    if (static_cast<std::size_t>(unknowns) < options.direct_solver_limit) {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
        bool ok = ldlt.info() == Eigen::Success;
        if (ok) {
            x = ldlt.solve(rhs);
            ok = ldlt.info() == Eigen::Success && x.allFinite();
        }
        if (!ok) {
            Eigen::SparseLU<SparseMatrix> lu;
            lu.analyzePattern(a);
            lu.factorize(a);
            if (lu.info() != Eigen::Success) {
                throw Error(ErrorKind::singular_system, "harmonic system is singular");
            }
            x = lu.solve(rhs);
        }
    } else {
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg;
        cg.setTolerance(options.cg_tolerance);
        cg.setMaxIterations(std::max(1000, 10 * unknowns));
        cg.compute(a);
        x = cg.solve(rhs);
        if (cg.info() != Eigen::Success) {
            throw Error(ErrorKind::singular_system, "conjugate gradient did not converge");
        }
    }
    if (!x.allFinite()) {
        throw Error(ErrorKind::singular_system, "harmonic system is singular");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!pinned[i]) {
            uv[i] = x.row(row[i]).transpose();
        }
    }
    return uv;
}

bool has_flipped_face(std::span<const Vec2> uv, std::span<const Face> faces) {
    return std::any_of(faces.begin(), faces.end(), [&](const Face& f) {
        return !(signed_area(uv[f[0]], uv[f[1]], uv[f[2]]) > 0.0);
    });
}

}  // namespace

UVChart harmonic_solve(const TriangleMesh& mesh, const BoundaryLoop& loop, DomainKind domain,
                       WeightScheme weights, const HarmonicOptions& options) {
    const std::vector<double> t = chordal_parameterize(loop);
    std::vector<Vec2> boundary_uv;
    boundary_uv.reserve(t.size());
    for (double ti : t) {
        boundary_uv.push_back(map_boundary(domain, ti));
    }

    UVChart chart;
    chart.domain = domain;
    chart.weights_requested = weights;
    chart.weights_used = weights;
    chart.faces = mesh.faces();
    chart.real_vertex_count = mesh.vertex_count();
    chart.real_face_count = mesh.face_count();
    chart.boundary_vertices = loop.vertex_indices;
    chart.boundary_params = t;
    chart.face_area_3d = mesh.face_areas();

    chart.uv = solve_interior(mesh, loop.vertex_indices, boundary_uv, weights, options);
    if (weights == WeightScheme::cotangent && has_flipped_face(chart.uv, chart.faces)) {
        chart.warnings.emplace_back(
            "cotangent weights produced flipped UV triangles; fell back to uniform weights");
        chart.weights_used = WeightScheme::uniform;
        chart.uv = solve_interior(mesh, loop.vertex_indices, boundary_uv, WeightScheme::uniform,
                                  options);
    }
    chart.residual = harmonic_residual(mesh, chart.uv, chart.boundary_vertices, chart.weights_used);
    chart.rebuild_index(options.spatial_bins);
    return chart;
}

UVChart parameterize(const TriangleMesh& region, DomainKind domain, WeightScheme weights,
                     std::optional<int> start_vertex, const HarmonicOptions& options) {
    const FilledMesh filled = fill_holes(region, start_vertex);
    UVChart chart = harmonic_solve(filled.mesh, filled.outer, domain, weights, options);
    chart.real_vertex_count = filled.original_vertex_count;
    chart.real_face_count = filled.original_face_count;
    chart.face_area_3d.resize(chart.real_face_count);
    return chart;
}

// ---------------------------------------------------------------------------
// Correspondence
// ---------------------------------------------------------------------------

namespace {

void check_pairing(const UVChart& chart, const TriangleMesh& mesh) {
    if (chart.real_face_count != mesh.face_count() || chart.real_vertex_count != mesh.vertex_count()) {
        throw Error(ErrorKind::shape_mismatch, "chart does not match the mesh it is queried with");
    }
}

}  // namespace

SurfacePoint surface_point(const UVChart& chart, const TriangleMesh& mesh, double u, double v) {
    check_pairing(chart, mesh);
    const auto loc = chart.locate(Vec2(u, v));
    if (!loc) {
        throw Error(ErrorKind::out_of_chart, "UV point (" + std::to_string(u) + ", " +
                                                 std::to_string(v) + ") is outside the chart");
    }
    if (chart.is_hole_face(loc->face)) {
        throw Error(ErrorKind::inside_hole, "UV point (" + std::to_string(u) + ", " +
                                                std::to_string(v) + ") lies inside a hole");
    }
    const Face& f = mesh.faces()[loc->face];
    SurfacePoint out;
    out.face = loc->face;
    out.bary = loc->bary;
    out.position = Vec3::Zero();
    out.normal = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
        out.position += loc->bary[k] * mesh.vertices()[f[k]];
        out.normal += loc->bary[k] * mesh.vertex_normals()[f[k]];
    }
    const double len = out.normal.norm();
    if (len < 1e-9) {
        out.normal = mesh.face_normals()[loc->face];
    } else {
        out.normal /= len;
    }
    return out;
}

Vec2 uv_of_point(const UVChart& chart, const TriangleMesh& mesh, int face_id,
                 const std::array<double, 3>& bary) {
    check_pairing(chart, mesh);
    if (face_id < 0 || static_cast<std::size_t>(face_id) >= chart.real_face_count) {
        throw Error(ErrorKind::invalid_argument, "face id " + std::to_string(face_id) + " is invalid");
    }
    const double sum = bary[0] + bary[1] + bary[2];
    if (std::abs(sum - 1.0) > 1e-9 || bary[0] < 0.0 || bary[1] < 0.0 || bary[2] < 0.0) {
        throw Error(ErrorKind::invalid_argument,
                    "barycentric weights must be nonnegative and sum to 1");
    }
    const Face& f = chart.faces[face_id];
    return bary[0] * chart.uv[f[0]] + bary[1] * chart.uv[f[1]] + bary[2] * chart.uv[f[2]];
}

}  // namespace uvwipe
