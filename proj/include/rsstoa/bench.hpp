#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsstoa/model.hpp"
#include "rsstoa/optim.hpp"

namespace rsstoa {

enum class SolverKind { grid, gd, pso };

inline constexpr std::array<SolverKind, 3> kAllSolvers{SolverKind::grid, SolverKind::gd,
                                                       SolverKind::pso};

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(std::string_view name);

enum class InitMethod { offset, coarse_grid };

// Where the grid search box (and the PSO bounds, which share it) is centered.
enum class GridCenter { init, fixed };

struct GridSettings {
    GridCenter center = GridCenter::init;
    ParamVector fixed_center;
    // Position half span. When unset it is xy_half_span_per_radius times the
    // reference radius (ring radius, or receiver spread around their centroid).
    std::optional<double> xy_half_span;
    double xy_half_span_per_radius = 1.0;
    double p0_half_span = 3.0;  // dB
    double b_half_span = 25.0;  // m
    double xy_interval = 1.0;   // m
    double p0_interval = 0.5;   // dB
    double b_interval = 5.0;    // m
    bool parallel = false;
};

struct GdSettings {
    double gamma = 0.001;
    int max_iters = 200;
    std::optional<double> grad_tol;
};

struct PsoSettings {
    int max_iters = 200;
    int swarm_size = 100;
    double inertia = 0.8;
    double c1 = 0.1;
    double c2 = 0.1;
    // Per-trial swarm seed is seed + trial seed.
    std::uint64_t seed = 0;
};

struct SolverSettings {
    InitMethod init = InitMethod::offset;
    OffsetInit offset;
    CoarseGridInit coarse;
    GridSettings grid;
    GdSettings gd;
    PsoSettings pso;
    std::vector<SolverKind> enabled{kAllSolvers.begin(), kAllSolvers.end()};

    bool is_enabled(SolverKind kind) const;
};

// Concrete per-solver configs for one measurement set.
struct TrialConfigs {
    ParamVector init;
    GridSpec grid;
    GdConfig gd;
    PsoConfig pso;
};

// `truth` is only consulted by the offset initializer; `reference_radius`
// scales the grid's position span when no explicit span is configured.
TrialConfigs build_trial_configs(const ObjectiveContext& ctx, const SolverSettings& settings,
                                 const std::optional<Position2D>& truth,
                                 double reference_radius, std::uint64_t trial_seed);

struct SolverOutcome {
    SolverKind solver = SolverKind::grid;
    bool ok = false;
    std::string failure;  // exception message when !ok
    ParamVector estimate;
    double cost = 0.0;
    double error_m = 0.0;
    double time_s = 0.0;  // wall time of the solve call only
    std::size_t evaluations = 0;
};

struct TrialResult {
    std::uint64_t seed = 0;
    double radius = 0.0;
    int trial = 0;  // index within its radius
    std::vector<SolverOutcome> outcomes;  // in SolverSettings::enabled order

    const SolverOutcome* find(SolverKind kind) const;
};

// Samples one measurement set and runs every enabled solver on it. A solver
// that throws is recorded as a failure; the others still run.
TrialResult run_trial(const Scenario& scenario, const SolverSettings& settings,
                      std::uint64_t trial_seed, double reference_radius);

struct ExperimentConfig {
    std::vector<double> radii{50.0, 100.0, 150.0, 200.0};
    int trials_per_radius = 90;
    int n_receivers = 4;
    Position2D target;
    SignalParams signal;
    SolverSettings solvers;
    std::uint64_t master_seed = 1;
    bool warmup = true;  // one untimed trial before timing starts

    void validate() const;
};

struct SolverSummary {
    SolverKind solver = SolverKind::grid;
    std::vector<double> errors;  // successful trials, in trial order
    std::size_t failures = 0;
    double rmse = 0.0;
    double p80 = 0.0;
    double p95 = 0.0;
    double mean_time_s = 0.0;
    std::size_t total_evaluations = 0;
};

struct ExperimentReport {
    std::vector<TrialResult> trials;
    std::vector<SolverSummary> summaries;  // in SolverSettings::enabled order

    const SolverSummary* find(SolverKind kind) const;
};

// Trial seeds are master_seed + global trial index (radius-major).
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Aggregates stored trial records; run_experiment uses this too, so a report
// can always be re-derived from its trials.
std::vector<SolverSummary> summarize(const std::vector<TrialResult>& trials,
                                     const std::vector<SolverKind>& solvers);

double rmse(const std::vector<double>& errors);

// Nearest rank: the ceil(q/100 * n)-th smallest value (1-based), 0 < q <= 100.
double percentile(std::vector<double> errors, double q);

// Sorted errors paired with k/n, k = 1..n.
std::vector<std::pair<double, double>> cdf_points(std::vector<double> errors);

}  // namespace rsstoa
