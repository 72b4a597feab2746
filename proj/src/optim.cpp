#include "rsstoa/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "objective_terms.hpp"
#include "rsstoa/error.hpp"

namespace rsstoa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t axis_size(double half_span, double interval, const char* name) {
    if (!std::isfinite(interval) || !(interval > 0.0))
        throw InvalidParameterError(std::string("grid interval must be positive on axis ") + name);
    if (!std::isfinite(half_span) || half_span < 0.0)
        throw InvalidParameterError(std::string("grid half span must be >= 0 on axis ") + name);
    if (interval > 2.0 * half_span)
        throw EmptyGridError(std::string("grid axis ") + name + " has interval wider than its span");
    // The small slack keeps e.g. 3 / 0.5 from landing on 5.999...
    const auto k = static_cast<std::size_t>(std::floor(half_span / interval + 1e-9));
    return 2 * k + 1;
}

std::vector<double> axis_values(double center, double interval, std::size_t n) {
    const auto k = static_cast<double>(n / 2);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = center + (static_cast<double>(i) - k) * interval;
    return v;
}

struct GridBest {
    double cost = kInf;
    std::array<std::size_t, 4> index{};
    std::size_t evaluations = 0;
    bool found = false;
};

// Scans x indices [x_begin, x_end) in order, keeping the first strict minimum.
GridBest scan_grid(const ObjectiveContext& ctx, const std::array<std::vector<double>, 4>& axes,
                   std::size_t x_begin, std::size_t x_end) {
    const auto& m = ctx.measurements;
    const std::size_t n = ctx.receivers.size();
    std::vector<detail::ReceiverTerms> terms(n);
    GridBest best;
    for (std::size_t ix = x_begin; ix < x_end; ++ix) {
        for (std::size_t iy = 0; iy < axes[1].size(); ++iy) {
            bool feasible = true;
            for (std::size_t r = 0; r < n && feasible; ++r) {
                feasible = detail::try_receiver_terms(axes[0][ix], axes[1][iy], ctx.receivers[r],
                                                      m.toa[r], ctx.beta, ctx.d0, terms[r]);
            }
            if (!feasible) continue;
            for (std::size_t ip = 0; ip < axes[2].size(); ++ip) {
                const double p0 = axes[2][ip];
                for (std::size_t ib = 0; ib < axes[3].size(); ++ib) {
                    const double b = axes[3][ib];
                    detail::OrderedSum sum(n);
                    for (std::size_t r = 0; r < n; ++r)
                        sum[r] = detail::receiver_cost(terms[r], m.rss[r], p0, b);
                    const double c = sum.total();
                    ++best.evaluations;
                    if (c < best.cost || !best.found) {
                        best.cost = c;
                        best.index = {ix, iy, ip, ib};
                        best.found = true;
                    }
                }
            }
        }
    }
    return best;
}

// Infeasible candidates (too close to a receiver) cost +inf inside the swarm.
double swarm_cost(const ParamVector& theta, const ObjectiveContext& ctx) {
    const auto& m = ctx.measurements;
    detail::OrderedSum total(ctx.receivers.size());
    detail::ReceiverTerms t{};
    for (std::size_t i = 0; i < ctx.receivers.size(); ++i) {
        if (!detail::try_receiver_terms(theta.x, theta.y, ctx.receivers[i], m.toa[i], ctx.beta,
                                        ctx.d0, t))
            return kInf;
        total[i] = detail::receiver_cost(t, m.rss[i], theta.p0, theta.b);
    }
    return total.total();
}

}  // namespace

std::array<std::size_t, 4> GridSpec::axis_sizes() const {
    return {axis_size(half_span.x, interval.x, "x"), axis_size(half_span.y, interval.y, "y"),
            axis_size(half_span.p0, interval.p0, "p0"), axis_size(half_span.b, interval.b, "b")};
}

std::array<std::vector<double>, 4> GridSpec::axes() const {
    const auto n = axis_sizes();
    return {axis_values(center.x, interval.x, n[0]), axis_values(center.y, interval.y, n[1]),
            axis_values(center.p0, interval.p0, n[2]), axis_values(center.b, interval.b, n[3])};
}

void GdConfig::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidParameterError("learning rate must be positive");
    if (max_iters < 1) throw InvalidParameterError("max_iters must be >= 1");
    if (grad_tol && !(*grad_tol >= 0.0))
        throw InvalidParameterError("grad_tol must be >= 0");
    if (!init.is_finite()) throw InvalidParameterError("initial estimate must be finite");
}

void PsoConfig::validate() const {
    if (max_iters < 1) throw InvalidParameterError("PSO max_iters must be >= 1");
    if (swarm_size < 1) throw InvalidParameterError("PSO swarm_size must be >= 1");
    const auto lo = lower.as_array();
    const auto hi = upper.as_array();
    for (std::size_t k = 0; k < 4; ++k) {
        if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]) || !(lo[k] < hi[k]))
            throw InvalidParameterError("PSO bounds need lower < upper on every coordinate");
    }
    if (!std::isfinite(inertia) || !std::isfinite(c1) || !std::isfinite(c2))
        throw InvalidParameterError("PSO weights must be finite");
}

SolveResult grid_search(const ObjectiveContext& ctx, const GridSpec& spec) {
    ctx.validate();
    const auto axes = spec.axes();

    GridBest best;
    const std::size_t nx = axes[0].size();
    unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(nx));
    if (!spec.parallel || threads == 1) {
        best = scan_grid(ctx, axes, 0, nx);
    } else {
        // Contiguous x slabs merged in slab order keep the sequential tie-break.
        std::vector<GridBest> partial(threads);
        std::vector<std::thread> pool;
        const std::size_t chunk = (nx + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(nx, t * chunk);
            const std::size_t end = std::min(nx, begin + chunk);
            pool.emplace_back([&, t, begin, end] { partial[t] = scan_grid(ctx, axes, begin, end); });
        }
        for (auto& th : pool) th.join();
        for (const auto& p : partial) {
            best.evaluations += p.evaluations;
            if (p.found && (!best.found || p.cost < best.cost)) {
                best.cost = p.cost;
                best.index = p.index;
                best.found = true;
            }
        }
    }

    if (!best.found)
        throw InfeasibleError("every grid point lies within the minimum distance of a receiver");

    SolveResult r;
    r.estimate = {axes[0][best.index[0]], axes[1][best.index[1]], axes[2][best.index[2]],
                  axes[3][best.index[3]]};
    r.cost = best.cost;
    r.evaluations = best.evaluations;
    return r;
}

SolveResult gradient_descent(const ObjectiveContext& ctx, const GdConfig& cfg) {
    ctx.validate();
    cfg.validate();

    SolveResult r;
    ParamVector theta = cfg.init;
    double c = cost(theta, ctx);
    r.evaluations = 1;
    r.estimate = theta;
    r.cost = c;
    r.trajectory.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
    r.trajectory.push_back({0, c});

    for (int k = 0; k < cfg.max_iters; ++k) {
        const Gradient g = cost_gradient(theta, ctx);
        ++r.evaluations;
        if (cfg.grad_tol) {
            const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
            if (norm < *cfg.grad_tol) break;
        }
        theta = {theta.x - cfg.gamma * g[0], theta.y - cfg.gamma * g[1],
                 theta.p0 - cfg.gamma * g[2], theta.b - cfg.gamma * g[3]};
        if (!theta.is_finite())
            throw DivergenceError("gradient descent iterate became non-finite; reduce the learning rate");
        c = cost(theta, ctx);
        ++r.evaluations;
        if (!std::isfinite(c))
            throw DivergenceError("gradient descent cost became non-finite; reduce the learning rate");
        r.trajectory.push_back({k + 1, c});
        if (c < r.cost) {
            r.cost = c;
            r.estimate = theta;
        }
    }
    return r;
}

SolveResult pso(const ObjectiveContext& ctx, const PsoConfig& cfg) {
    ctx.validate();
    cfg.validate();

    const auto lo = cfg.lower.as_array();
    const auto hi = cfg.upper.as_array();
    const auto S = static_cast<std::size_t>(cfg.swarm_size);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    using Vec = std::array<double, 4>;
    std::vector<Vec> pos(S), vel(S), best_pos(S);
    std::vector<double> best_cost(S);

    for (auto& p : pos)
        for (std::size_t k = 0; k < 4; ++k) p[k] = lo[k] + (hi[k] - lo[k]) * unit(rng);
    for (auto& v : vel)
        for (std::size_t k = 0; k < 4; ++k) {
            const double half = (hi[k] - lo[k]) / 2.0;
            v[k] = -half + 2.0 * half * unit(rng);
        }

    SolveResult r;
    std::size_t g = 0;
    for (std::size_t i = 0; i < S; ++i) {
        best_pos[i] = pos[i];
        best_cost[i] = swarm_cost(ParamVector::from_array(pos[i]), ctx);
        if (best_cost[i] < best_cost[g]) g = i;
    }
    r.evaluations = S;
    if (!std::isfinite(best_cost[g]))
        throw InfeasibleError("no initial particle is feasible; check the PSO bounds");
    Vec global = best_pos[g];
    double global_cost = best_cost[g];

    r.trajectory.reserve(static_cast<std::size_t>(cfg.max_iters));
    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        for (std::size_t i = 0; i < S; ++i) {
            const double r1 = unit(rng);
            const double r2 = unit(rng);
            auto& v = vel[i];
            auto& p = pos[i];
            for (std::size_t k = 0; k < 4; ++k) {
                v[k] = cfg.inertia * v[k] + cfg.c1 * r1 * (best_pos[i][k] - p[k])
                       + cfg.c2 * r2 * (global[k] - p[k]);
                p[k] = std::clamp(p[k] + v[k], lo[k], hi[k]);
            }
            const double c = swarm_cost(ParamVector::from_array(p), ctx);
            ++r.evaluations;
            if (c < best_cost[i]) {
                best_pos[i] = p;
                best_cost[i] = c;
                if (best_cost[i] < global_cost) {
                    global = best_pos[i];
                    global_cost = best_cost[i];
                }
            }
        }
        r.trajectory.push_back({iter, global_cost});
    }

    r.estimate = ParamVector::from_array(global);
    r.cost = global_cost;
    return r;
}

SolveResult solve(const ObjectiveContext& ctx, const SolverConfig& cfg) {
    return std::visit(
        [&](const auto& c) -> SolveResult {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, GridSpec>) return grid_search(ctx, c);
            else if constexpr (std::is_same_v<T, GdConfig>) return gradient_descent(ctx, c);
            else return pso(ctx, c);
        },
        cfg);
}

ParamVector offset_init(const Position2D& truth, const OffsetInit& init) {
    return {truth.x + init.dx, truth.y + init.dy, init.p0, init.b};
}

ParamVector coarse_grid_init(const ObjectiveContext& ctx, const CoarseGridInit& init) {
    ctx.validate();
    if (init.points_per_axis < 1)
        throw InvalidParameterError("coarse grid needs at least one point per axis");
    if (!(init.margin >= 0.0)) throw InvalidParameterError("coarse grid margin must be >= 0");

    double xmin = ctx.receivers.front().x, xmax = xmin;
    double ymin = ctx.receivers.front().y, ymax = ymin;
    for (const auto& rx : ctx.receivers) {
        xmin = std::min(xmin, rx.x);
        xmax = std::max(xmax, rx.x);
        ymin = std::min(ymin, rx.y);
        ymax = std::max(ymax, rx.y);
    }
    xmin -= init.margin;
    xmax += init.margin;
    ymin -= init.margin;
    ymax += init.margin;

    const int n = init.points_per_axis;
    const double dx = (xmax - xmin) / n;
    const double dy = (ymax - ymin) / n;
    ParamVector best{0.0, 0.0, init.p0, init.b};
    double best_cost = kInf;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const ParamVector cand{xmin + (i + 0.5) * dx, ymin + (j + 0.5) * dy, init.p0, init.b};
            const double c = swarm_cost(cand, ctx);
            if (c < best_cost) {
                best_cost = c;
                best = cand;
            }
        }
    }
    if (!std::isfinite(best_cost))
        throw InfeasibleError("coarse grid initializer found no feasible point");
    return best;
}

}  // namespace rsstoa
