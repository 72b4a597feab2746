#include "rsstoa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "rsstoa/error.hpp"

namespace rsstoa {

std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::grid: return "grid";
        case SolverKind::gd: return "gd";
        case SolverKind::pso: return "pso";
    }
    return "?";
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
    for (auto k : kAllSolvers)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

bool SolverSettings::is_enabled(SolverKind kind) const {
    return std::find(enabled.begin(), enabled.end(), kind) != enabled.end();
}

const SolverOutcome* TrialResult::find(SolverKind kind) const {
    for (const auto& o : outcomes)
        if (o.solver == kind) return &o;
    return nullptr;
}

const SolverSummary* ExperimentReport::find(SolverKind kind) const {
    for (const auto& s : summaries)
        if (s.solver == kind) return &s;
    return nullptr;
}

TrialConfigs build_trial_configs(const ObjectiveContext& ctx, const SolverSettings& settings,
                                 const std::optional<Position2D>& truth,
                                 double reference_radius, std::uint64_t trial_seed) {
    TrialConfigs out;
    if (settings.init == InitMethod::offset) {
        if (!truth)
            throw InvalidParameterError("offset initializer needs the true target position");
        out.init = offset_init(*truth, settings.offset);
    } else {
        out.init = coarse_grid_init(ctx, settings.coarse);
    }

    const auto& gs = settings.grid;
    const double xy_span = gs.xy_half_span.value_or(gs.xy_half_span_per_radius * reference_radius);
    out.grid.center = gs.center == GridCenter::init ? out.init : gs.fixed_center;
    out.grid.half_span = {xy_span, xy_span, gs.p0_half_span, gs.b_half_span};
    out.grid.interval = {gs.xy_interval, gs.xy_interval, gs.p0_interval, gs.b_interval};
    out.grid.parallel = gs.parallel;

    out.gd.init = out.init;
    out.gd.gamma = settings.gd.gamma;
    out.gd.max_iters = settings.gd.max_iters;
    out.gd.grad_tol = settings.gd.grad_tol;

    const auto& ps = settings.pso;
    const auto& c = out.grid.center;
    const auto& h = out.grid.half_span;
    out.pso.max_iters = ps.max_iters;
    out.pso.swarm_size = ps.swarm_size;
    out.pso.lower = {c.x - h.x, c.y - h.y, c.p0 - h.p0, c.b - h.b};
    out.pso.upper = {c.x + h.x, c.y + h.y, c.p0 + h.p0, c.b + h.b};
    out.pso.inertia = ps.inertia;
    out.pso.c1 = ps.c1;
    out.pso.c2 = ps.c2;
    out.pso.seed = ps.seed + trial_seed;
    return out;
}

TrialResult run_trial(const Scenario& scenario, const SolverSettings& settings,
                      std::uint64_t trial_seed, double reference_radius) {
    TrialResult result;
    result.seed = trial_seed;
    result.radius = reference_radius;

    const auto ctx = ObjectiveContext::from_scenario(scenario, sample_measurements(scenario, trial_seed));
    const auto configs = build_trial_configs(ctx, settings, scenario.target, reference_radius,
                                             trial_seed);

    for (auto kind : settings.enabled) {
        SolverOutcome o;
        o.solver = kind;
        SolverConfig cfg;
        switch (kind) {
            case SolverKind::grid: cfg = configs.grid; break;
            case SolverKind::gd: cfg = configs.gd; break;
            case SolverKind::pso: cfg = configs.pso; break;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
            const SolveResult r = solve(ctx, cfg);
            const auto stop = std::chrono::steady_clock::now();
            o.ok = true;
            o.estimate = r.estimate;
            o.cost = r.cost;
            o.evaluations = r.evaluations;
            o.error_m = distance(r.estimate.position(), scenario.target);
            o.time_s = std::chrono::duration<double>(stop - start).count();
        } catch (const Error& e) {
            const auto stop = std::chrono::steady_clock::now();
            o.ok = false;
            o.failure = e.what();
            o.time_s = std::chrono::duration<double>(stop - start).count();
        }
        result.outcomes.push_back(std::move(o));
    }
    return result;
}

void ExperimentConfig::validate() const {
    if (radii.empty()) throw InvalidParameterError("at least one radius is required");
    for (double r : radii)
        if (!(r > 0.0) || !std::isfinite(r))
            throw InvalidParameterError("radii must be positive");
    if (trials_per_radius < 1) throw InvalidParameterError("trials_per_radius must be >= 1");
    if (n_receivers < 1) throw InvalidParameterError("n_receivers must be >= 1");
    if (solvers.enabled.empty()) throw InvalidParameterError("no solver enabled");
    signal.validate();
    if (!target.is_finite()) throw InvalidParameterError("target must be finite");

    // Surface configuration errors before any trial runs.
    GdConfig gd{ParamVector{}, solvers.gd.gamma, solvers.gd.max_iters, solvers.gd.grad_tol};
    gd.validate();
    if (solvers.pso.max_iters < 1 || solvers.pso.swarm_size < 1)
        throw InvalidParameterError("PSO max_iters and swarm_size must be >= 1");
    if (solvers.coarse.points_per_axis < 1)
        throw InvalidParameterError("coarse grid needs at least one point per axis");
    for (double r : radii) make_ring_scenario(target, r, n_receivers, signal);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;

    if (cfg.warmup) {
        const auto s = make_ring_scenario(cfg.target, cfg.radii.front(), cfg.n_receivers, cfg.signal);
        (void)run_trial(s, cfg.solvers, cfg.master_seed, cfg.radii.front());
    }

    std::uint64_t index = 0;
    for (double radius : cfg.radii) {
        const auto scenario = make_ring_scenario(cfg.target, radius, cfg.n_receivers, cfg.signal);
        for (int t = 0; t < cfg.trials_per_radius; ++t, ++index) {
            auto trial = run_trial(scenario, cfg.solvers, cfg.master_seed + index, radius);
            trial.trial = t;
            report.trials.push_back(std::move(trial));
        }
    }
    report.summaries = summarize(report.trials, cfg.solvers.enabled);
    return report;
}

std::vector<SolverSummary> summarize(const std::vector<TrialResult>& trials,
                                     const std::vector<SolverKind>& solvers) {
    std::vector<SolverSummary> out;
    for (auto kind : solvers) {
        SolverSummary s;
        s.solver = kind;
        double time_total = 0.0;
        for (const auto& t : trials) {
            const auto* o = t.find(kind);
            if (!o) continue;
            if (!o->ok) {
                ++s.failures;
                continue;
            }
            s.errors.push_back(o->error_m);
            time_total += o->time_s;
            s.total_evaluations += o->evaluations;
        }
        if (!s.errors.empty()) {
            s.rmse = rmse(s.errors);
            s.p80 = percentile(s.errors, 80.0);
            s.p95 = percentile(s.errors, 95.0);
            s.mean_time_s = time_total / static_cast<double>(s.errors.size());
        } else {
            s.rmse = s.p80 = s.p95 = s.mean_time_s = std::nan("");
        }
        out.push_back(std::move(s));
    }
    return out;
}

double rmse(const std::vector<double>& errors) {
    if (errors.empty()) throw InvalidParameterError("rmse of an empty list");
    double sum_sq = 0.0;
    for (double e : errors) sum_sq += e * e;
    return std::sqrt(sum_sq / static_cast<double>(errors.size()));
}

double percentile(std::vector<double> errors, double q) {
    if (errors.empty()) throw InvalidParameterError("percentile of an empty list");
    if (!(q > 0.0 && q <= 100.0)) throw InvalidParameterError("percentile q must be in (0, 100]");
    std::sort(errors.begin(), errors.end());
    const double n = static_cast<double>(errors.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0));
    rank = std::clamp<std::size_t>(rank, 1, errors.size());
    return errors[rank - 1];
}

std::vector<std::pair<double, double>> cdf_points(std::vector<double> errors) {
    if (errors.empty()) throw InvalidParameterError("cdf of an empty list");
    std::sort(errors.begin(), errors.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(errors.size());
    const double n = static_cast<double>(errors.size());
    for (std::size_t k = 0; k < errors.size(); ++k)
        out.emplace_back(errors[k], static_cast<double>(k + 1) / n);
    return out;
}

}  // namespace rsstoa
