#pragma once

#include <array>
#include <vector>

#include "rsstoa/model.hpp"

namespace rsstoa {

// Unknowns of the estimator. Clock bias is carried as the equivalent range
// bias b = c * tau so that every coordinate has a meter/dB scale.
struct ParamVector {
    double x = 0.0;   // m
    double y = 0.0;   // m
    double p0 = 0.0;  // dBm
    double b = 0.0;   // m

    double tau() const { return b / kSpeedOfLight; }
    Position2D position() const { return {x, y}; }
    bool is_finite() const;

    static ParamVector from_tau(double x, double y, double p0, double tau) {
        return {x, y, p0, tau * kSpeedOfLight};
    }
    std::array<double, 4> as_array() const { return {x, y, p0, b}; }
    static ParamVector from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

    friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

// (dF/dx, dF/dy, dF/dp0, dF/db)
using Gradient = std::array<double, 4>;

struct ObjectiveContext {
    std::vector<Position2D> receivers;
    MeasurementSet measurements;
    double beta = 3.0;
    double d0 = 1.0;

    void validate() const;
    static ObjectiveContext from_scenario(const Scenario& scenario, MeasurementSet measurements);
};

// Distance-dependent TOA weighting factor, 4e-5 * d - 1e-3, clamped at zero
// (the affine form is negative below 25 m).
double weight(double d);

// Weighted least-squares ML cost:
//   sum_i (P_i - p0 + 10 beta log10(d_i/d0))^2 + weight(d_i) * (T_i - d_i/c - tau)^2
// The TOA residual is evaluated in meters, (c T_i - d_i - b), against
// weight(d_i) / c^2, which is the same value. Throws DegenerateGeometryError
// when any candidate distance is below kMinDistance.
double cost(const ParamVector& theta, const ObjectiveContext& ctx);

// Analytic gradient of cost() with weight(d_i) frozen at the current d_i,
// i.e. the derivative of the weight itself is not included.
Gradient cost_gradient(const ParamVector& theta, const ObjectiveContext& ctx);

}  // namespace rsstoa
