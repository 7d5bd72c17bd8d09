#pragma once

#include "uvwipe/grid_world.hpp"
#include "uvwipe/path_lift.hpp"

#include <span>
#include <string>
#include <vector>

namespace uvwipe {

struct PathReport {
    double total_length = 0.0;       // m
    double coverage_fraction = 0.0;  // 3D-area weighted, holes excluded
    double s_delta_gamma = 0.0;      // rad
    int step_count = 0;
};

double path_length(std::span<const Vec3> points);
double path_length(const std::vector<PosedWaypoint>& waypoints);

// Covered 3D area over total 3D area of valid, non-hole pixels.
double coverage_area(const GridWorld& world);

// Sum of |gamma_{i+1} - gamma_i| with each difference wrapped to (-pi, pi].
double cumulative_gamma(std::span<const double> gammas);
double cumulative_gamma(const std::vector<PosedWaypoint>& waypoints);

// Evaluates a lifted path: stamps the UV path on a fresh copy of `world`.
PathReport evaluate_path(const UVPath& path, const std::vector<PosedWaypoint>& waypoints,
                         GridWorld world, double footprint_radius);

struct MethodRow {
    std::string method;
    PathReport report;
};

// methods x (length, area %, S_|dgamma|) table.
std::string comparison_csv(const std::vector<MethodRow>& rows);

}  // namespace uvwipe
