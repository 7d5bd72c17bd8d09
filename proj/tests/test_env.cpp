#include "support/mesh_fixtures.hpp"
#include "support/world_fixtures.hpp"

#include "uvwipe/coverage_env.hpp"
#include "uvwipe/error.hpp"
#include "uvwipe/grid_world.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

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

GridWorld square_world(int res) {
    const auto mesh = fixtures::unit_square_mesh();
    return make_grid_world(parameterize(mesh, DomainKind::square, WeightScheme::uniform), res);
}

GridWorld disk_world(int res) {
    const auto mesh = fixtures::grid_mesh(12);
    return make_grid_world(parameterize(mesh, DomainKind::disk, WeightScheme::uniform), res);
}

EnvConfig small_config(int res) {
    EnvConfig cfg;
    cfg.resolution = res;
    cfg.obs_size = 16;
    cfg.obs_scales = 2;
    cfg.reward.max_steps = 200;
    return cfg;
}

}  // namespace

TEST(GridWorld, SquareChartFillsRaster) {
    const GridWorld w = square_world(32);
    EXPECT_EQ(w.free_pixel_count(), 32u * 32u);
    double area = 0.0;
    for (double a : w.pixel_area_3d.data()) area += a;
    EXPECT_NEAR(area, 1.0, 1e-12);
    EXPECT_EQ(w.coverage_fraction(), 0.0);
}

TEST(GridWorld, DiskChartBorder) {
    const GridWorld w = disk_world(128);
    const double expected = kPi / 4.0 * 128 * 128;
    EXPECT_NEAR(static_cast<double>(w.free_pixel_count()), expected, 0.02 * expected);
    for (int r = 0; r < 128; ++r) {
        for (int c = 0; c < 128; ++c) {
            if (w.border(r, c)) {
                EXPECT_LE(w.extent.pixel_center(r, c).norm(), 1.0 + 1e-12);
            }
        }
    }
}

TEST(GridWorld, HolesArePreCovered) {
    const auto mesh = fixtures::grid_with_hole(12, 0.34, 0.66);
    const auto chart = parameterize(mesh, DomainKind::square, WeightScheme::uniform);
    const GridWorld w = make_grid_world(chart, 64);
    const std::size_t holes = count_ones(w.hole);
    EXPECT_GT(holes, 0u);
    EXPECT_EQ(count_ones(w.coverage), holes);
    EXPECT_EQ(w.coverage_fraction(), 0.0);
    EXPECT_EQ(w.free_pixel_count(), 64u * 64u - holes);
    double area = 0.0;
    for (double a : w.pixel_area_3d.data()) area += a;
    EXPECT_NEAR(area, mesh.total_area(), 1e-9);
}

TEST(GridExtent, PixelOfRoundTrip) {
    const GridExtent e{16, Vec2(-1, -1), 2.0};
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            const auto px = e.pixel_of(e.pixel_center(r, c));
            ASSERT_TRUE(px.has_value());
            EXPECT_EQ(px->first, r);
            EXPECT_EQ(px->second, c);
        }
    }
    EXPECT_EQ(e.pixel_of(Vec2(1.0, 1.0)), std::make_pair(15, 15));
    EXPECT_FALSE(e.pixel_of(Vec2(1.0001, 0.0)).has_value());
}

TEST(Stamp, DiskMatchesCenterDistanceOracle) {
    GridWorld w = square_world(64);
    const Vec2 center(0.1234, -0.377);
    const double radius = 0.08;
    const int added = stamp_disk(w, center, radius);
    int expected = 0;
    for (int r = 0; r < 64; ++r) {
        for (int c = 0; c < 64; ++c) {
            expected += (w.extent.pixel_center(r, c) - center).norm() <= radius;
        }
    }
    EXPECT_EQ(added, expected);
    EXPECT_EQ(stamp_disk(w, center, radius), 0);
}

TEST(Stamp, TinyRadiusStillMarksOwnPixel) {
    GridWorld w = square_world(16);
    EXPECT_EQ(stamp_disk(w, Vec2(0.01, 0.01), 1e-6), 1);
}

TEST(Env, RejectsStartOutsideBorder) {
    CoverageEnv env(disk_world(32), small_config(32));
    EXPECT_EQ(kind_of([&] { env.reset(StartPose{Vec2(0.99, 0.99), 0.0}); }), ErrorKind::out_of_chart);
}

TEST(Env, AutoCoefficients) {
    const GridWorld w = square_world(32);
    CoverageEnv env(w, small_config(32));
    EXPECT_DOUBLE_EQ(env.lambda_c(), 1.0 / 1024.0);
    EXPECT_DOUBLE_EQ(env.lambda_tv(), 0.1 * (1.0 / 1024.0) * 32);
    EXPECT_DOUBLE_EQ(env.r_const(), -1.0 / 200.0);
}

TEST(Env, RewardFormula) {
    CoverageEnv env(square_world(32), small_config(32));
    env.reset(StartPose{Vec2(0, 0), 0.0});
    double prev_tv = total_variation(env.world().coverage);
    for (int i = 0; i < 10; ++i) {
        const StepResult r = env.step(10.0);
        const double expected =
            env.lambda_c() * r.n_new - env.lambda_tv() * (r.tv_value - prev_tv) + env.r_const();
        EXPECT_DOUBLE_EQ(r.reward, expected);
        EXPECT_DOUBLE_EQ(r.tv_value, total_variation(env.world().coverage));
        prev_tv = r.tv_value;
    }
}

TEST(Env, ConservationAndStaysInBorder) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> action(-60.0, 60.0);
    for (int episode = 0; episode < 10; ++episode) {
        CoverageEnv env(disk_world(32), small_config(32));
        env.reset(static_cast<std::uint64_t>(episode));
        long sum = 0;
        while (!env.done()) {
            sum += env.step(action(rng)).n_new;
            EXPECT_TRUE(env.world().is_valid(env.agent().position));
        }
        EXPECT_EQ(static_cast<std::size_t>(sum),
                  count_ones(env.world().coverage) - env.initial_covered());
    }
}

TEST(Env, ClampsTurnRate) {
    CoverageEnv env(square_world(32), small_config(32));
    env.reset(StartPose{Vec2(0, 0), 0.0});
    env.step(170.0);
    EXPECT_NEAR(env.agent().heading, deg_to_rad(45.0), 1e-15);
    EXPECT_EQ(env.trace().back().omega, 45.0);
    env.step(-500.0);
    EXPECT_NEAR(env.agent().heading, 0.0, 1e-15);
    EXPECT_NEAR(env.agent().gamma, 0.0, 1e-15);
}

TEST(Env, StepCapAndDoneGuard) {
    EnvConfig cfg = small_config(32);
    cfg.reward.max_steps = 5;
    CoverageEnv env(square_world(32), cfg);
    env.reset(StartPose{Vec2(0, 0), 0.0});
    StepResult last;
    for (int i = 0; i < 5; ++i) last = env.step(0.0);
    EXPECT_TRUE(last.done);
    EXPECT_EQ(last.done_reason, DoneReason::step_cap);
    EXPECT_EQ(kind_of([&] { env.step(0.0); }), ErrorKind::episode_done);
}

TEST(Env, TargetReachedEndsEpisode) {
    EnvConfig cfg = small_config(8);
    cfg.footprint_radius = 1.0;
    cfg.speed = 0.3;
    cfg.reward.target_coverage = 0.9;
    CoverageEnv env(square_world(8), cfg);
    env.reset(StartPose{Vec2(-0.9, 0.0), 0.0});
    StepResult r;
    int steps = 0;
    do {
        r = env.step(0.0);
        ++steps;
    } while (!r.done);
    EXPECT_EQ(r.done_reason, DoneReason::target_reached);
    EXPECT_GE(env.world().coverage_fraction(), 0.9);
    EXPECT_LT(steps, cfg.reward.max_steps);
}

TEST(Env, BlockedMotionSlidesAlongBorder) {
    CoverageEnv env(square_world(32), small_config(32));
    env.reset(StartPose{Vec2(0.9, 0.0), 0.0});
    const auto path = env.move(Vec2(0.98, 0.0), Vec2(0.05, 0.05));
    const Vec2 end = path.back();
    EXPECT_TRUE(env.world().is_valid(end));
    EXPECT_GT(end.x(), 0.99);
    EXPECT_NEAR(end.y(), 0.05, 1e-12);
}

TEST(Env, ReplayIsBitwiseDeterministic) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> action(-45.0, 45.0);
    std::vector<double> actions(150);
    for (double& a : actions) a = action(rng);
    auto run = [&] {
        CoverageEnv env(disk_world(32), small_config(32));
        std::vector<Observation> obs{env.reset(std::uint64_t{3})};
        for (double a : actions) {
            if (env.done()) break;
            obs.push_back(env.step(a).observation);
        }
        std::ostringstream trace;
        write_trace_csv(trace, env.trace());
        return std::make_pair(obs, trace.str());
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
}

TEST(Env, TraceCsv) {
    CoverageEnv env(square_world(16), small_config(16));
    env.reset(StartPose{Vec2(0, 0), 0.0});
    env.step(5.0);
    std::ostringstream out;
    write_trace_csv(out, env.trace());
    const std::string text = out.str();
    EXPECT_EQ(text.rfind("step,u,v,heading,omega,n_new,tv,reward\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Observation, HeadingPointsAlongColumns) {
    GridWorld w(GridExtent{33, Vec2(-1, -1), 2.0});
    w.border.fill(1);
    const double px = w.extent.pixel_size();
    // Covered pixel three cells in +v from the centre pixel.
    w.coverage(16 + 3, 16) = 1;
    w.refresh_frontier();
    const AgentState agent{Vec2(0, 0), 0.5 * kPi, 0, 0.0};
    const Observation obs = egocentric_observe(w, agent, 9, 1, px);
    EXPECT_EQ(obs.at(0, Observation::coverage_channel, 4, 4 + 3), 1);
    EXPECT_EQ(count_ones(w.coverage), 1u);
    int total = 0;
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) total += obs.at(0, Observation::coverage_channel, r, c);
    }
    EXPECT_EQ(total, 1);
}

TEST(Observation, OutsideReadsZero) {
    GridWorld w(GridExtent{16, Vec2(-1, -1), 2.0});
    w.border.fill(1);
    w.coverage.fill(1);
    const AgentState agent{Vec2(0.95, 0.0), 0.0, 0, 0.0};
    const Observation obs = egocentric_observe(w, agent, 16, 2, w.extent.pixel_size());
    EXPECT_EQ(obs.at(0, Observation::border_channel, 8, 8), 1);
    EXPECT_EQ(obs.at(0, Observation::border_channel, 8, 15), 0);
    EXPECT_EQ(obs.at(0, Observation::coverage_channel, 8, 15), 0);
    EXPECT_EQ(obs.at(1, Observation::border_channel, 8, 4), 1);
    EXPECT_EQ(obs.at(1, Observation::border_channel, 8, 0), 0);
}

TEST(Observation, CoarseScaleDoublesCell) {
    GridWorld w(GridExtent{64, Vec2(-1, -1), 2.0});
    w.border.fill(1);
    const double px = w.extent.pixel_size();
    const AgentState agent{w.extent.pixel_center(32, 32), 0.0, 0, 0.0};
    w.coverage(32, 32 + 6) = 1;
    const Observation obs = egocentric_observe(w, agent, 16, 2, px);
    EXPECT_EQ(obs.at(0, Observation::coverage_channel, 8, 8 + 6), 1);
    EXPECT_EQ(obs.at(1, Observation::coverage_channel, 8, 8 + 3), 1);
}

TEST(Observation, QuarterTurnEquivariance) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> heading(0.0, kTwoPi);
    for (int trial = 0; trial < 20; ++trial) {
        GridWorld w = fixtures::random_world(65, rng);
        const AgentState agent{Vec2(0, 0), heading(rng), 0, 0.0};
        const Observation base = egocentric_observe(w, agent, 32, 2, w.extent.pixel_size());
        AgentState turned = agent;
        for (int q = 1; q <= 4; ++q) {
            w = fixtures::rotate_quarter(w);
            turned.heading = wrap_angle_positive(turned.heading + 0.5 * kPi);
            EXPECT_EQ(egocentric_observe(w, turned, 32, 2, w.extent.pixel_size()), base)
                << "trial " << trial << " quarter " << q;
        }
    }
}
