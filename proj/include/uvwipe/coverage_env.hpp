#pragma once

#include "uvwipe/geometry.hpp"
#include "uvwipe/grid_world.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace uvwipe {

inline constexpr double kMaxOmegaDeg = 45.0;

// Reward coefficients. NaN means "derive from the world": lambda_c =
// 1 / free pixels, lambda_tv = 0.1 * lambda_c * resolution,
// r_const = -1 / max_steps.
struct RewardConfig {
    double lambda_c = std::numeric_limits<double>::quiet_NaN();
    double lambda_tv = std::numeric_limits<double>::quiet_NaN();
    double r_const = std::numeric_limits<double>::quiet_NaN();
    double target_coverage = 0.95;
    int max_steps = 2000;

    void validate() const;
};

struct EnvConfig {
    int resolution = 256;
    double footprint_radius = 0.08;  // chart units
    double speed = 0.05;             // chart units per step
    int obs_size = 64;
    int obs_scales = 2;
    // Finest observation cell in chart units; 0 means one world pixel.
    double obs_base_cell = 0.0;
    RewardConfig reward;

    void validate() const;
};

struct AgentState {
    Vec2 position = Vec2::Zero();
    double heading = 0.0;  // radians in [0, 2 pi)
    int step_count = 0;
    double gamma = 0.0;  // accumulated tool Z rotation
};

// scales x 3 channels (coverage, border, frontier) x size x size, values 0/1.
// The agent sits at pixel (size/2, size/2) of every scale and its heading
// points along +column.
struct Observation {
    int scales = 0;
    int size = 0;
    std::vector<std::uint8_t> data;

    Observation() = default;
    Observation(int s, int n) : scales(s), size(n), data(static_cast<std::size_t>(s) * 3 * n * n, 0) {}

    enum Channel { coverage_channel = 0, border_channel = 1, frontier_channel = 2 };

    std::uint8_t& at(int scale, int channel, int row, int col) {
        return data[((static_cast<std::size_t>(scale) * 3 + channel) * size + row) * size + col];
    }
    [[nodiscard]] std::uint8_t at(int scale, int channel, int row, int col) const {
        return data[((static_cast<std::size_t>(scale) * 3 + channel) * size + row) * size + col];
    }
    bool operator==(const Observation&) const = default;
};

// Multi-scale egocentric crop: scale k samples a size x size grid with cell
// base_cell * 2^k, rotated by the agent heading, nearest-neighbour. Samples
// off the raster or outside the border read as zero on all channels.
Observation egocentric_observe(const GridWorld& world, const AgentState& agent, int size,
                               int scales, double base_cell);

enum class DoneReason { none, target_reached, step_cap };
std::string_view to_string(DoneReason reason);

struct StepResult {
    Observation observation;
    double reward = 0.0;
    int n_new = 0;
    double tv_value = 0.0;
    bool done = false;
    DoneReason done_reason = DoneReason::none;
};

struct StartPose {
    Vec2 position = Vec2::Zero();
    double heading = 0.0;
};

struct TraceRow {
    int step;
    double u;
    double v;
    double heading;
    double omega;  // degrees, after clamping
    int n_new;
    double tv;
    double reward;
};

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

class CoverageEnv {
public:
    CoverageEnv(GridWorld world, EnvConfig config);

    Observation reset(const StartPose& start);
    // Uniformly random free pixel center and heading.
    Observation reset(std::uint64_t seed);

    // omega in degrees per step; clamped to [-45, 45].
    StepResult step(double omega_deg);

    [[nodiscard]] const GridWorld& world() const noexcept { return world_; }
    [[nodiscard]] const AgentState& agent() const noexcept { return agent_; }
    [[nodiscard]] const EnvConfig& config() const noexcept { return config_; }
    [[nodiscard]] bool done() const noexcept { return done_; }
    [[nodiscard]] const std::vector<TraceRow>& trace() const noexcept { return trace_; }
    [[nodiscard]] std::size_t initial_covered() const noexcept { return initial_covered_; }

    [[nodiscard]] double lambda_c() const noexcept { return lambda_c_; }
    [[nodiscard]] double lambda_tv() const noexcept { return lambda_tv_; }
    [[nodiscard]] double r_const() const noexcept { return r_const_; }
    [[nodiscard]] double base_cell() const noexcept { return base_cell_; }

    [[nodiscard]] Observation observe() const;

    // Moves from `from` by `delta`, stopping at the border and sliding along
    // it axis by axis. Returns the visited polyline (first point = from).
    [[nodiscard]] std::vector<Vec2> move(const Vec2& from, const Vec2& delta) const;

private:
    [[nodiscard]] Vec2 advance(const Vec2& from, const Vec2& delta, bool& blocked) const;

    GridWorld world_;
    EnvConfig config_;
    AgentState agent_;
    double lambda_c_ = 0.0;
    double lambda_tv_ = 0.0;
    double r_const_ = 0.0;
    double base_cell_ = 0.0;
    double previous_tv_ = 0.0;
    bool done_ = true;
    std::size_t initial_covered_ = 0;
    std::vector<TraceRow> trace_;
};

}  // namespace uvwipe
