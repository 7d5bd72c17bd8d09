#include "uvwipe/coverage_env.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <iomanip>
#include <ostream>
#include <string>

namespace uvwipe {

void RewardConfig::validate() const {
    if (!std::isnan(r_const) && !(r_const < 0.0)) {
        throw Error(ErrorKind::invalid_argument, "r_const must be negative");
    }
    if (!(target_coverage >= 0.90 && target_coverage <= 0.99)) {
        throw Error(ErrorKind::invalid_argument, "target_coverage must lie in [0.90, 0.99]");
    }
    if (max_steps <= 0) {
        throw Error(ErrorKind::invalid_argument, "max_steps must be positive");
    }
}

void EnvConfig::validate() const {
    reward.validate();
    if (resolution <= 0 || obs_size <= 0 || obs_scales <= 0) {
        throw Error(ErrorKind::invalid_argument, "raster sizes must be positive");
    }
    if (!(footprint_radius > 0.0) || !(speed > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "footprint radius and speed must be positive");
    }
    if (obs_base_cell < 0.0) {
        throw Error(ErrorKind::invalid_argument, "obs_base_cell must be non-negative");
    }
}

std::string_view to_string(DoneReason reason) {
    switch (reason) {
        case DoneReason::none: return "none";
        case DoneReason::target_reached: return "target-reached";
        case DoneReason::step_cap: return "step-cap";
    }
    return "none";
}

Observation egocentric_observe(const GridWorld& world, const AgentState& agent, int size,
                               int scales, double base_cell) {
    Observation obs(scales, size);
    // Whole quarter turns are applied exactly so that rotating the world by
    // 90 degrees about the agent permutes samples without rounding.
    const double quarter = 0.5 * kPi;
    const double heading = wrap_angle_positive(agent.heading);
    int turns = static_cast<int>(std::floor(heading / quarter));
    double rest = heading - turns * quarter;
    if (rest < 0.0) {
        rest = 0.0;
    }
    turns = ((turns % 4) + 4) % 4;
    const double c = std::cos(rest);
    const double s = std::sin(rest);
    const int half = size / 2;
    for (int k = 0; k < scales; ++k) {
        const double cell = base_cell * static_cast<double>(1 << k);
        for (int r = 0; r < size; ++r) {
            const double oy = (r - half) * cell;
            for (int col = 0; col < size; ++col) {
                const double ox = (col - half) * cell;
                const Vec2 q(c * ox - s * oy, s * ox + c * oy);
                Vec2 d;
                switch (turns) {
                    case 1: d = Vec2(-q.y(), q.x()); break;
                    case 2: d = Vec2(-q.x(), -q.y()); break;
                    case 3: d = Vec2(q.y(), -q.x()); break;
                    default: d = q; break;
                }
                const Vec2 p = agent.position + d;
                const auto px = world.extent.pixel_of(p);
                if (!px || !world.border(px->first, px->second)) {
                    continue;
                }
                obs.at(k, Observation::coverage_channel, r, col) = world.coverage(px->first, px->second);
                obs.at(k, Observation::border_channel, r, col) = 1;
                obs.at(k, Observation::frontier_channel, r, col) = world.frontier(px->first, px->second);
            }
        }
    }
    return obs;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
    out << "step,u,v,heading,omega,n_new,tv,reward\n";
    out << std::setprecision(17);
    for (const TraceRow& t : trace) {
        out << t.step << ',' << t.u << ',' << t.v << ',' << t.heading << ',' << t.omega << ','
            << t.n_new << ',' << t.tv << ',' << t.reward << '\n';
    }
}

CoverageEnv::CoverageEnv(GridWorld world, EnvConfig config)
    : world_(std::move(world)), config_(config) {
    config_.validate();
    const std::size_t free = world_.free_pixel_count();
    if (free == 0) {
        throw Error(ErrorKind::invalid_argument, "world has no free pixels");
    }
    const RewardConfig& rc = config_.reward;
    lambda_c_ = std::isnan(rc.lambda_c) ? 1.0 / static_cast<double>(free) : rc.lambda_c;
    lambda_tv_ = std::isnan(rc.lambda_tv) ? 0.1 * lambda_c_ * world_.resolution() : rc.lambda_tv;
    r_const_ = std::isnan(rc.r_const) ? -1.0 / rc.max_steps : rc.r_const;
    base_cell_ = config_.obs_base_cell > 0.0 ? config_.obs_base_cell : world_.extent.pixel_size();
}

Observation CoverageEnv::observe() const {
    return egocentric_observe(world_, agent_, config_.obs_size, config_.obs_scales, base_cell_);
}

Observation CoverageEnv::reset(const StartPose& start) {
    if (!world_.is_valid(start.position)) {
        throw Error(ErrorKind::out_of_chart, "start position (" + std::to_string(start.position.x()) +
                                                 ", " + std::to_string(start.position.y()) +
                                                 ") is outside the border region");
    }
    world_.reset_coverage();
    agent_ = AgentState{start.position, wrap_angle_positive(start.heading), 0, 0.0};
    stamp_disk(world_, agent_.position, config_.footprint_radius);
    world_.refresh_frontier();
    previous_tv_ = total_variation(world_.coverage);
    initial_covered_ = count_ones(world_.coverage);
    done_ = false;
    trace_.clear();
    trace_.push_back({0, agent_.position.x(), agent_.position.y(), agent_.heading, 0.0, 0,
                      previous_tv_, 0.0});
    return observe();
}

Observation CoverageEnv::reset(std::uint64_t seed) {
    std::vector<std::pair<int, int>> candidates;
    for (int r = 0; r < world_.resolution(); ++r) {
        for (int c = 0; c < world_.resolution(); ++c) {
            if (world_.is_free(r, c)) {
                candidates.emplace_back(r, c);
            }
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    const auto [r, c] = candidates[pick(rng)];
    const double heading = angle(rng);
    return reset(StartPose{world_.extent.pixel_center(r, c), heading});
}

Vec2 CoverageEnv::advance(const Vec2& from, const Vec2& delta, bool& blocked) const {
    blocked = false;
    const double len = delta.norm();
    if (len == 0.0) {
        return from;
    }
    const int n = std::max(1, static_cast<int>(std::ceil(len / (0.25 * world_.extent.pixel_size()))));
    Vec2 last = from;
    for (int k = 1; k <= n; ++k) {
        const Vec2 p = from + delta * (static_cast<double>(k) / n);
        if (!world_.is_valid(p)) {
            blocked = true;
            // Bisect between the last valid sample and the first invalid one.
            Vec2 lo = last;
            Vec2 hi = p;
            for (int it = 0; it < 40; ++it) {
                const Vec2 mid = 0.5 * (lo + hi);
                if (world_.is_valid(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
        last = p;
    }
    return from + delta;
}

std::vector<Vec2> CoverageEnv::move(const Vec2& from, const Vec2& delta) const {
    bool blocked = false;
    const Vec2 direct = advance(from, delta, blocked);
    if (!blocked) {
        return {from, direct};
    }
    bool unused = false;
    const Vec2 p1 = advance(from, Vec2(delta.x(), 0.0), unused);
    const Vec2 p2 = advance(p1, Vec2(0.0, delta.y()), unused);
    return {from, p1, p2};
}

StepResult CoverageEnv::step(double omega_deg) {
    if (done_) {
        throw Error(ErrorKind::episode_done, "step called on a finished episode");
    }
    const double omega = std::clamp(omega_deg, -kMaxOmegaDeg, kMaxOmegaDeg);
    const double turn = deg_to_rad(omega);
    agent_.heading = wrap_angle_positive(agent_.heading + turn);
    agent_.gamma += turn;

    const Vec2 delta = config_.speed * Vec2(std::cos(agent_.heading), std::sin(agent_.heading));
    const std::vector<Vec2> swept = move(agent_.position, delta);
    agent_.position = swept.back();
    ++agent_.step_count;

    StepResult result;
    result.n_new = stamp_polyline(world_, swept, config_.footprint_radius);
    world_.refresh_frontier();
    result.tv_value = total_variation(world_.coverage);
    result.reward = lambda_c_ * result.n_new - lambda_tv_ * (result.tv_value - previous_tv_) + r_const_;
    previous_tv_ = result.tv_value;

    if (world_.coverage_fraction() >= config_.reward.target_coverage) {
        result.done = true;
        result.done_reason = DoneReason::target_reached;
    } else if (agent_.step_count >= config_.reward.max_steps) {
        result.done = true;
        result.done_reason = DoneReason::step_cap;
    }
    done_ = result.done;
    result.observation = observe();
    trace_.push_back({agent_.step_count, agent_.position.x(), agent_.position.y(), agent_.heading,
                      omega, result.n_new, result.tv_value, result.reward});
    return result;
}

}  // namespace uvwipe
