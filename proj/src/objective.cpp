#include "rsstoa/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "objective_terms.hpp"
#include "rsstoa/error.hpp"

namespace rsstoa {

bool ParamVector::is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(p0) && std::isfinite(b);
}

void ObjectiveContext::validate() const {
    if (receivers.empty())
        throw InvalidParameterError("objective needs at least one receiver");
    measurements.validate(receivers.size());
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidParameterError("path-loss exponent beta must be positive");
    if (!(d0 > 0.0))
        throw InvalidParameterError("reference distance must be positive");
}

ObjectiveContext ObjectiveContext::from_scenario(const Scenario& scenario,
                                                 MeasurementSet measurements) {
    ObjectiveContext ctx{scenario.receivers, std::move(measurements), scenario.signal.beta,
                         scenario.signal.d0};
    ctx.validate();
    return ctx;
}

double weight(double d) { return std::max(4e-5 * d - 1e-3, 0.0); }

double cost(const ParamVector& theta, const ObjectiveContext& ctx) {
    const auto& m = ctx.measurements;
    detail::OrderedSum total(ctx.receivers.size());
    for (std::size_t i = 0; i < ctx.receivers.size(); ++i) {
        const auto t = detail::receiver_terms(theta.x, theta.y, ctx.receivers[i], m.toa[i],
                                              ctx.beta, ctx.d0);
        total[i] = detail::receiver_cost(t, m.rss[i], theta.p0, theta.b);
    }
    return total.total();
}

Gradient cost_gradient(const ParamVector& theta, const ObjectiveContext& ctx) {
    const auto& m = ctx.measurements;
    const double path_loss_slope = 10.0 * ctx.beta / std::numbers::ln10;
    const std::size_t n = ctx.receivers.size();
    std::array<detail::OrderedSum, 4> parts{detail::OrderedSum(n), detail::OrderedSum(n),
                                            detail::OrderedSum(n), detail::OrderedSum(n)};
    for (std::size_t i = 0; i < ctx.receivers.size(); ++i) {
        const auto& rx = ctx.receivers[i];
        const auto t = detail::receiver_terms(theta.x, theta.y, rx, m.toa[i], ctx.beta, ctx.d0);
        const double e_rss = m.rss[i] - theta.p0 + t.path_loss;
        const double e_toa = t.range_base - theta.b;
        const double ux = (theta.x - rx.x) / t.distance;
        const double uy = (theta.y - rx.y) / t.distance;
        // d e_rss/d pos = (10 beta / (d ln10)) u, d e_toa/d pos = -u, weight frozen.
        const double radial = 2.0 * e_rss * path_loss_slope / t.distance
                              - 2.0 * t.toa_weight * e_toa;
        parts[0][i] = radial * ux;
        parts[1][i] = radial * uy;
        parts[2][i] = -2.0 * e_rss;
        parts[3][i] = -2.0 * t.toa_weight * e_toa;
    }
    return {parts[0].total(), parts[1].total(), parts[2].total(), parts[3].total()};
}

}  // namespace rsstoa
