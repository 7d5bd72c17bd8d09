#include "support/mesh_fixtures.hpp"

#include "uvwipe/error.hpp"
#include "uvwipe/parameterization.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

using namespace uvwipe;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected uvwipe::Error";
    return ErrorKind::io;
}

BoundaryLoop loop_from_points(const std::vector<Vec3>& pts) {
    std::vector<int> ring(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ring[i] = static_cast<int>(i);
    return make_boundary_loop(pts, ring);
}

int flipped_count(const UVChart& chart) {
    int flipped = 0;
    for (std::size_t f = 0; f < chart.real_face_count; ++f) {
        const Face& t = chart.faces[f];
        if (signed_area(chart.uv[t[0]], chart.uv[t[1]], chart.uv[t[2]]) <= 0.0) ++flipped;
    }
    return flipped;
}

}  // namespace

TEST(Chordal, EqualChordsOfSquare) {
    const auto loop = loop_from_points({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
    const auto t = chordal_parameterize(loop);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t[0], 0.0);
    EXPECT_DOUBLE_EQ(t[1], 0.25);
    EXPECT_DOUBLE_EQ(t[2], 0.5);
    EXPECT_DOUBLE_EQ(t[3], 0.75);
}

TEST(Chordal, ThreeFourFiveTriangle) {
    const auto loop = loop_from_points({Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(3, 4, 0)});
    const auto t = chordal_parameterize(loop);
    // Perimeter 12: cumulative chords 0, 3, 7.
    EXPECT_EQ(t[0], 0.0);
    EXPECT_NEAR(t[1], 3.0 / 12.0, 1e-15);
    EXPECT_NEAR(t[2], 7.0 / 12.0, 1e-15);
}

TEST(Chordal, Errors) {
    const std::vector<Vec3> pts = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(1, 0, 0)};
    BoundaryLoop repeated;
    repeated.vertex_indices = {0, 1, 2, 1};
    repeated.cumulative_lengths = {0, 1, 2, 3, 4};
    EXPECT_NE(kind_of([&] { chordal_parameterize(repeated); }), ErrorKind::io);
    EXPECT_EQ(kind_of([&] { make_boundary_loop(pts, {0, 1, 2, 1}); }), ErrorKind::non_simple_boundary);
    const auto zero = loop_from_points({Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 1, 0)});
    EXPECT_EQ(kind_of([&] { chordal_parameterize(zero); }), ErrorKind::invalid_argument);
}

TEST(Chordal, StrictlyIncreasingOnRandomLoops) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 3 + trial;
        std::vector<Vec3> pts;
        for (int i = 0; i < k; ++i) {
            const double a = kTwoPi * i / k;
            const double r = jitter(rng);
            pts.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
        }
        const auto t = chordal_parameterize(loop_from_points(pts));
        EXPECT_EQ(t.front(), 0.0);
        for (int i = 1; i < k; ++i) EXPECT_GT(t[i], t[i - 1]);
        EXPECT_LT(t.back(), 1.0);
    }
}

TEST(SquareMap, Corners) {
    EXPECT_EQ(map_boundary_square(0.0), Vec2(-1, -1));
    EXPECT_EQ(map_boundary_square(0.25), Vec2(1, -1));
    EXPECT_EQ(map_boundary_square(0.5), Vec2(1, 1));
    EXPECT_EQ(map_boundary_square(0.75), Vec2(-1, 1));
    EXPECT_EQ(map_boundary_square(1.0), Vec2(-1, -1));
}

TEST(SquareMap, LiesOnBoundaryAndIsContinuous) {
    for (int i = 0; i <= 1000; ++i) {
        const Vec2 p = map_boundary_square(i / 1000.0);
        EXPECT_NEAR(p.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    }
    for (double join : {0.25, 0.5, 0.75}) {
        const Vec2 left = map_boundary_square(std::nextafter(join, 0.0));
        const Vec2 right = map_boundary_square(join);
        EXPECT_LE((left - right).cwiseAbs().maxCoeff(), 1e-15);
    }
    EXPECT_EQ(kind_of([] { map_boundary_square(-0.1); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([] { map_boundary_square(1.5); }), ErrorKind::invalid_argument);
}

TEST(CircleMap, QuarterTurns) {
    EXPECT_NEAR((map_boundary_circle(0.0) - Vec2(1, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((map_boundary_circle(0.25) - Vec2(0, 1)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((map_boundary_circle(0.5) - Vec2(-1, 0)).norm(), 0.0, 1e-15);
    EXPECT_EQ(kind_of([] { map_boundary_circle(2.0); }), ErrorKind::invalid_argument);
}

TEST(Harmonic, CenterOfThreeByThreeGrid) {
    const auto mesh = fixtures::grid_mesh(2);
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    EXPECT_LT(chart.uv[4].norm(), 1e-9);
}

TEST(Harmonic, FlatGridIsAffineImage) {
    const auto mesh = fixtures::grid_mesh(32);
    const auto start = std::chrono::steady_clock::now();
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double err = 0.0;
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
        const Vec3& p = mesh.vertices()[i];
        const Vec2 expected(2.0 * p.x() - 1.0, 2.0 * p.y() - 1.0);
        err = std::max(err, (chart.uv[i] - expected).norm());
    }
    EXPECT_LT(err, 1e-6);
    EXPECT_LT(chart.residual, 1e-8);
    EXPECT_LT(seconds, 1.0);
}

TEST(Harmonic, CotangentReproducesAffineMapOnIrregularMesh) {
    const auto mesh = fixtures::perturbed_grid_mesh(12, 0.3, 99);
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::cotangent);
    EXPECT_EQ(chart.weights_used, WeightScheme::cotangent);
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
        const Vec3& p = mesh.vertices()[i];
        EXPECT_LT((chart.uv[i] - Vec2(2 * p.x() - 1, 2 * p.y() - 1)).norm(), 1e-6);
    }
}

TEST(Harmonic, InteriorVerticesAreWeightedMeans) {
    const auto mesh = fixtures::perturbed_grid_mesh(10, 0.35, 3);
    for (auto scheme : {WeightScheme::uniform, WeightScheme::cotangent}) {
        const auto chart = parameterize(mesh, DomainKind::disk, scheme);
        // Independent check straight from the edge weights.
        std::vector<Vec2> sum(mesh.vertex_count(), Vec2::Zero());
        std::vector<double> total(mesh.vertex_count(), 0.0);
        for (const auto& e : laplacian_weights(mesh, chart.weights_used)) {
            sum[e.i] += e.w * chart.uv[e.j];
            sum[e.j] += e.w * chart.uv[e.i];
            total[e.i] += e.w;
            total[e.j] += e.w;
        }
        std::vector<bool> pinned(mesh.vertex_count(), false);
        for (int b : chart.boundary_vertices) pinned[b] = true;
        for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
            if (pinned[i]) continue;
            EXPECT_LT((chart.uv[i] - sum[i] / total[i]).norm(), 1e-8);
        }
    }
}

TEST(Harmonic, BoundaryOnDomain) {
    const auto mesh = fixtures::perturbed_grid_mesh(9, 0.2, 5);
    const auto square = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    for (int b : square.boundary_vertices) {
        EXPECT_EQ(square.uv[b].cwiseAbs().maxCoeff(), 1.0);
    }
    const auto disk = parameterize(mesh, DomainKind::disk, WeightScheme::uniform);
    for (int b : disk.boundary_vertices) EXPECT_NEAR(disk.uv[b].norm(), 1.0, 1e-12);
    EXPECT_EQ(disk.faces.size(), mesh.face_count());
    EXPECT_EQ(disk.faces, mesh.faces());
}

TEST(Harmonic, UniformWeightsAreInjective) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto mesh = fixtures::perturbed_grid_mesh(15, 0.45, seed);
        for (auto domain : {DomainKind::square, DomainKind::disk}) {
            EXPECT_EQ(flipped_count(parameterize(mesh, domain, WeightScheme::uniform)), 0);
        }
    }
}

TEST(Harmonic, CurvedPatch) {
    const auto mesh = fixtures::grid_mesh(16, [](double x, double y) {
        return Vec3(x, y, 0.3 * std::sin(3.0 * x) * std::cos(2.0 * y));
    });
    const auto chart = parameterize(mesh, DomainKind::disk, WeightScheme::cotangent);
    EXPECT_EQ(flipped_count(chart), 0);
    EXPECT_LT(chart.residual, 1e-8);
}

TEST(Harmonic, CotangentFlipsFallBackToUniform) {
    // Strongly jittered coarse grid; found by search to flip under cotangent weights.
    const auto mesh = fixtures::perturbed_grid_mesh(3, 0.45, 125);
    const auto chart = parameterize(mesh, DomainKind::disk, WeightScheme::cotangent);
    EXPECT_EQ(flipped_count(chart), 0);
    EXPECT_EQ(chart.weights_requested, WeightScheme::cotangent);
    EXPECT_EQ(chart.weights_used, WeightScheme::uniform);
    EXPECT_FALSE(chart.warnings.empty());
}

TEST(Harmonic, IsolatedVertexIsSingular) {
    const auto base = fixtures::grid_mesh(3);
    auto verts = base.vertices();
    verts.emplace_back(0.5, 0.5, 1.0);
    const TriangleMesh mesh(verts, base.faces());
    EXPECT_EQ(kind_of([&] {
                  harmonic_solve(mesh, extract_boundary(mesh), DomainKind::square,
                                 WeightScheme::uniform);
              }),
              ErrorKind::singular_system);
}

TEST(Harmonic, IterativeSolverMatchesDirect) {
    const auto mesh = fixtures::perturbed_grid_mesh(20, 0.3, 11);
    const auto direct = parameterize(mesh, DomainKind::disk, WeightScheme::uniform);
    HarmonicOptions opts;
    opts.direct_solver_limit = 1;
    const auto iterative = parameterize(mesh, DomainKind::disk, WeightScheme::uniform, {}, opts);
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
        EXPECT_LT((direct.uv[i] - iterative.uv[i]).norm(), 1e-7);
    }
}

TEST(Harmonic, HolesAreFilledVirtually) {
    const auto mesh = fixtures::grid_with_hole(12, 0.34, 0.66);
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    EXPECT_EQ(chart.real_vertex_count, mesh.vertex_count());
    EXPECT_EQ(chart.real_face_count, mesh.face_count());
    EXPECT_GT(chart.faces.size(), mesh.face_count());
    EXPECT_EQ(flipped_count(chart), 0);
    const auto center = chart.locate(chart.uv.back());
    ASSERT_TRUE(center.has_value());
    EXPECT_TRUE(chart.is_hole_face(center->face));
    EXPECT_EQ(kind_of([&] { surface_point(chart, mesh, chart.uv.back().x(), chart.uv.back().y()); }),
              ErrorKind::inside_hole);
}

TEST(SurfacePoint, VertexAndCentroid) {
    const auto mesh = fixtures::grid_mesh(6, [](double x, double y) {
        return Vec3(x, y, x * x - y);
    });
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    for (int i : {0, 10, 24, 48}) {
        const auto sp = surface_point(chart, mesh, chart.uv[i].x(), chart.uv[i].y());
        EXPECT_LT((sp.position - mesh.vertices()[i]).norm(), 1e-12);
    }
    for (std::size_t fi = 0; fi < mesh.face_count(); ++fi) {
        const Face& f = mesh.faces()[fi];
        const Vec2 c = (chart.uv[f[0]] + chart.uv[f[1]] + chart.uv[f[2]]) / 3.0;
        const Vec3 expected =
            (mesh.vertices()[f[0]] + mesh.vertices()[f[1]] + mesh.vertices()[f[2]]) / 3.0;
        const auto sp = surface_point(chart, mesh, c.x(), c.y());
        EXPECT_EQ(sp.face, static_cast<int>(fi));
        EXPECT_LT((sp.position - expected).norm(), 1e-12);
        EXPECT_NEAR(sp.normal.norm(), 1.0, 1e-12);
    }
    EXPECT_EQ(kind_of([&] { surface_point(chart, mesh, 2.0, 0.0); }), ErrorKind::out_of_chart);
}

TEST(SurfacePoint, RoundTripThroughBarycentrics) {
    const auto mesh = fixtures::perturbed_grid_mesh(8, 0.3, 17);
    const auto chart = parameterize(mesh, DomainKind::disk, WeightScheme::uniform);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> coord(-0.7, 0.7);
    for (int i = 0; i < 500; ++i) {
        const double u = coord(rng);
        const double v = coord(rng);
        const auto sp = surface_point(chart, mesh, u, v);
        const Vec2 back = uv_of_point(chart, mesh, sp.face, sp.bary);
        EXPECT_LT((back - Vec2(u, v)).norm(), 1e-9);
    }
}

TEST(UvOfPoint, WeightsAndErrors) {
    const auto mesh = fixtures::unit_square_mesh();
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    const Face& f = chart.faces[1];
    EXPECT_EQ(uv_of_point(chart, mesh, 1, {1.0, 0.0, 0.0}), chart.uv[f[0]]);
    EXPECT_EQ(kind_of([&] { uv_of_point(chart, mesh, 1, {0.5, 0.5, 0.1}); }),
              ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([&] { uv_of_point(chart, mesh, 7, {1.0, 0.0, 0.0}); }),
              ErrorKind::invalid_argument);
}

TEST(SpatialIndex, LowestFaceWinsOnSharedEdge) {
    const auto mesh = fixtures::unit_square_mesh();
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    // The diagonal is shared by both faces.
    const auto hit = chart.locate(Vec2(0.0, 0.0));
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->face, 0);
    EXPECT_FALSE(chart.contains(Vec2(1.0 + 1e-9, 0.0)));
    EXPECT_TRUE(chart.contains(Vec2(1.0, 0.0)));
}
