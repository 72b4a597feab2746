#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rsstoa/objective.hpp"

namespace rsstoa {

// Exhaustive search box. Each axis holds center + k * interval for
// k = -K..K with K = floor(half_span / interval), so the center is always a
// grid point and the ends reach +-half_span when it is a multiple of interval.
struct GridSpec {
    ParamVector center;
    ParamVector half_span{1.0, 1.0, 1.0, 1.0};
    ParamVector interval{1.0, 1.0, 1.0, 1.0};
    bool parallel = false;    // opt-in; returns the same point as the sequential scan
    unsigned threads = 0;     // 0 = hardware concurrency

    // Points per axis in (x, y, p0, b) order. Throws EmptyGridError when an
    // axis admits no point (interval > 2 * half_span) and
    // InvalidParameterError for non-finite or non-positive steps.
    std::array<std::size_t, 4> axis_sizes() const;
    std::array<std::vector<double>, 4> axes() const;
};

struct GdConfig {
    ParamVector init;
    double gamma = 0.001;
    int max_iters = 200;
    std::optional<double> grad_tol;

    void validate() const;
};

struct PsoConfig {
    int max_iters = 200;   // M
    int swarm_size = 100;  // S
    ParamVector lower;
    ParamVector upper;
    double inertia = 0.8;
    double c1 = 0.1;
    double c2 = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

using SolverConfig = std::variant<GridSpec, GdConfig, PsoConfig>;

struct TrajectoryPoint {
    int iteration = 0;
    // GD: cost of the iterate. PSO: global-best cost after the iteration.
    double cost = 0.0;
    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct SolveResult {
    ParamVector estimate;
    double cost = 0.0;
    std::size_t evaluations = 0;  // cost and gradient evaluations
    std::vector<TrajectoryPoint> trajectory;
    friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

// Lowest-cost grid point, first in scan order (x outermost, then y, p0, b) on
// ties. Points closer than kMinDistance to a receiver are skipped.
SolveResult grid_search(const ObjectiveContext& ctx, const GridSpec& spec);

// theta_{k+1} = theta_k - gamma * grad F(theta_k). Returns the lowest-cost
// iterate visited, including the initial point.
SolveResult gradient_descent(const ObjectiveContext& ctx, const GdConfig& cfg);

// Global-best particle swarm with scalar r1, r2 per particle update, positions
// clamped to [lower, upper]. Deterministic in cfg.seed.
SolveResult pso(const ObjectiveContext& ctx, const PsoConfig& cfg);

SolveResult solve(const ObjectiveContext& ctx, const SolverConfig& cfg);

// Initial estimates.

// A fixed offset from the true target position plus absolute p0 and range
// bias, e.g. [x_t - 20, y_t - 20, -60, 1350]. Only usable when truth is known.
struct OffsetInit {
    double dx = -20.0;
    double dy = -20.0;
    double p0 = -60.0;
    double b = 1350.0;
};

ParamVector offset_init(const Position2D& truth, const OffsetInit& init);

// Truth-free: best point of an n x n lattice of cell centers over the
// receivers' bounding box (grown by `margin` on each side), p0 and b fixed.
struct CoarseGridInit {
    int points_per_axis = 16;
    double margin = 0.0;
    double p0 = -60.0;
    double b = 1350.0;
};

ParamVector coarse_grid_init(const ObjectiveContext& ctx, const CoarseGridInit& init);

}  // namespace rsstoa
