#pragma once

// Test-only reference computations, written directly from the model
// equations (seconds-based TOA residual, explicit weight) and kept
// independent of the library's internal term helpers.

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "rsstoa/objective.hpp"
#include "rsstoa/optim.hpp"

namespace oracle {

inline constexpr double c = 299792458.0;

inline double affine_weight(double d) {
    const double w = 4e-5 * d - 1e-3;
    return w < 0.0 ? 0.0 : w;
}

inline double dist(double x, double y, const rsstoa::Position2D& r) {
    return std::sqrt((x - r.x) * (x - r.x) + (y - r.y) * (y - r.y));
}

// RSS part of the cost.
inline double rss_part(const std::array<double, 4>& th, const rsstoa::ObjectiveContext& ctx) {
    double s = 0.0;
    for (std::size_t i = 0; i < ctx.receivers.size(); ++i) {
        const double d = dist(th[0], th[1], ctx.receivers[i]);
        const double e = ctx.measurements.rss[i] - th[2] + 10.0 * ctx.beta * std::log10(d / ctx.d0);
        s += e * e;
    }
    return s;
}

// TOA part with per-receiver weights supplied by the caller.
inline double toa_part(const std::array<double, 4>& th, const rsstoa::ObjectiveContext& ctx,
                       const std::vector<double>& w) {
    const double tau = th[3] / c;
    double s = 0.0;
    for (std::size_t i = 0; i < ctx.receivers.size(); ++i) {
        const double d = dist(th[0], th[1], ctx.receivers[i]);
        const double e = ctx.measurements.toa[i] - d / c - tau;
        s += w[i] * e * e;
    }
    return s;
}

inline std::vector<double> weights_at(const std::array<double, 4>& th,
                                      const rsstoa::ObjectiveContext& ctx) {
    std::vector<double> w;
    for (const auto& r : ctx.receivers) w.push_back(affine_weight(dist(th[0], th[1], r)));
    return w;
}

inline double cost(const rsstoa::ParamVector& theta, const rsstoa::ObjectiveContext& ctx) {
    const auto th = theta.as_array();
    return rss_part(th, ctx) + toa_part(th, ctx, weights_at(th, ctx));
}

// Central differences, step h, weights frozen at theta. The two parts are
// differenced separately: the TOA part is ~1e-17 of the RSS part and would
// vanish below rounding in a differenced sum.
inline std::array<double, 4> fd_gradient(const rsstoa::ParamVector& theta,
                                         const rsstoa::ObjectiveContext& ctx, double h = 1e-4) {
    const auto th = theta.as_array();
    const auto w = weights_at(th, ctx);
    std::array<double, 4> g{};
    for (std::size_t k = 0; k < 4; ++k) {
        auto plus = th, minus = th;
        plus[k] += h;
        minus[k] -= h;
        const double d_rss = (rss_part(plus, ctx) - rss_part(minus, ctx)) / (2.0 * h);
        const double d_toa = (toa_part(plus, ctx, w) - toa_part(minus, ctx, w)) / (2.0 * h);
        g[k] = d_rss + d_toa;
    }
    return g;
}

inline double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Exhaustive grid argmin: plain nested loops over the same symmetric axes,
// first strict minimum wins, infeasible points skipped.
struct GridArgmin {
    rsstoa::ParamVector point;
    double cost = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
};

inline GridArgmin brute_force_grid(const rsstoa::ObjectiveContext& ctx, const rsstoa::GridSpec& g) {
    auto axis = [](double center, double half, double step) {
        std::vector<double> v;
        const int k = static_cast<int>(std::floor(half / step + 1e-9));
        for (int i = -k; i <= k; ++i) v.push_back(center + i * step);
        return v;
    };
    const auto xs = axis(g.center.x, g.half_span.x, g.interval.x);
    const auto ys = axis(g.center.y, g.half_span.y, g.interval.y);
    const auto ps = axis(g.center.p0, g.half_span.p0, g.interval.p0);
    const auto bs = axis(g.center.b, g.half_span.b, g.interval.b);
    GridArgmin best;
    bool found = false;
    for (double x : xs)
        for (double y : ys)
            for (double p : ps)
                for (double b : bs) {
                    double v;
                    try {
                        v = rsstoa::cost({x, y, p, b}, ctx);
                    } catch (const std::exception&) {
                        continue;
                    }
                    ++best.evaluated;
                    if (!found || v < best.cost) {
                        best.cost = v;
                        best.point = {x, y, p, b};
                        found = true;
                    }
                }
    return best;
}

// A random noisy instance: N receivers scattered around a random target,
// measurements drawn from the model with noise.
inline rsstoa::ObjectiveContext random_context(std::mt19937_64& rng, int n = 4) {
    std::uniform_real_distribution<double> pos(-150.0, 150.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> beta(2.0, 4.0);
    rsstoa::ObjectiveContext ctx;
    ctx.beta = beta(rng);
    const double tx = pos(rng), ty = pos(rng), p0 = -60.0 + 5.0 * noise(rng), tau = 4.5e-6;
    for (int i = 0; i < n; ++i) {
        rsstoa::Position2D r{pos(rng), pos(rng)};
        while (dist(tx, ty, r) < 10.0) r = {pos(rng), pos(rng)};
        const double d = dist(tx, ty, r);
        ctx.receivers.push_back(r);
        ctx.measurements.rss.push_back(p0 - 10.0 * ctx.beta * std::log10(d) + 6.0 * noise(rng));
        ctx.measurements.toa.push_back(d / c + tau + 1e-7 * noise(rng));
    }
    return ctx;
}

// A candidate near the instance's receivers that keeps >= 5 m from each.
inline rsstoa::ParamVector random_theta(std::mt19937_64& rng, const rsstoa::ObjectiveContext& ctx) {
    std::uniform_real_distribution<double> pos(-180.0, 180.0);
    std::uniform_real_distribution<double> p0(-70.0, -50.0);
    std::uniform_real_distribution<double> b(1200.0, 1500.0);
    for (;;) {
        rsstoa::ParamVector t{pos(rng), pos(rng), p0(rng), b(rng)};
        bool ok = true;
        for (const auto& r : ctx.receivers) ok = ok && dist(t.x, t.y, r) >= 5.0;
        if (ok) return t;
    }
}

}  // namespace oracle
