#include "rsstoa/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rsstoa/error.hpp"

namespace rsstoa {

bool Position2D::is_finite() const { return std::isfinite(x) && std::isfinite(y); }

void SignalParams::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidParameterError("path-loss exponent beta must be positive");
    if (d0 != 1.0)
        throw InvalidParameterError("reference distance d0 must be 1 m");
    if (!(sigma_rss >= 0.0) || !std::isfinite(sigma_rss))
        throw InvalidParameterError("sigma_rss must be >= 0");
    if (!(sigma_toa >= 0.0) || !std::isfinite(sigma_toa))
        throw InvalidParameterError("sigma_toa must be >= 0");
    if (!std::isfinite(p0_true) || !std::isfinite(tau_true))
        throw InvalidParameterError("p0_true and tau_true must be finite");
}

void Scenario::validate() const {
    signal.validate();
    if (receivers.empty())
        throw InvalidParameterError("scenario needs at least one receiver");
    if (!target.is_finite())
        throw InvalidParameterError("target position must be finite");
    for (std::size_t i = 0; i < receivers.size(); ++i) {
        if (!receivers[i].is_finite())
            throw InvalidParameterError("receiver positions must be finite");
        for (std::size_t j = 0; j < i; ++j) {
            if (receivers[i] == receivers[j]) {
                std::ostringstream os;
                os << "receivers " << j << " and " << i << " coincide";
                throw InvalidParameterError(os.str());
            }
        }
        if (distance(target, receivers[i]) < kMinDistance) {
            std::ostringstream os;
            os << "receiver " << i << " is closer than " << kMinDistance << " m to the target";
            throw DegenerateGeometryError(os.str());
        }
    }
}

void MeasurementSet::validate(std::size_t n_receivers) const {
    if (rss.size() != n_receivers || toa.size() != n_receivers)
        throw InvalidParameterError("measurement count does not match receiver count");
    for (std::size_t i = 0; i < n_receivers; ++i) {
        if (!std::isfinite(rss[i]) || !std::isfinite(toa[i]))
            throw InvalidParameterError("measurements must be finite");
    }
}

double distance(const Position2D& a, const Position2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double rss_mean(const Position2D& target, const Position2D& rx, double p0, double beta,
                double d0) {
    const double d = distance(target, rx);
    if (!(d >= kMinDistance))
        throw DegenerateGeometryError("target-receiver distance below minimum");
    return p0 - 10.0 * beta * std::log10(d / d0);
}

double toa_mean(const Position2D& target, const Position2D& rx, double tau) {
    return distance(target, rx) / kSpeedOfLight + tau;
}

MeasurementSet sample_measurements(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    const auto& sig = scenario.signal;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);

    MeasurementSet out;
    out.rss.reserve(scenario.receivers.size());
    out.toa.reserve(scenario.receivers.size());
    for (const auto& rx : scenario.receivers) {
        const double n_rss = unit(rng);
        const double n_toa = unit(rng);
        double rss = rss_mean(scenario.target, rx, sig.p0_true, sig.beta, sig.d0);
        double toa = toa_mean(scenario.target, rx, sig.tau_true);
        // Skip the multiply for zero sigma so noise-free sets equal the means bit for bit.
        if (sig.sigma_rss > 0.0) rss += sig.sigma_rss * n_rss;
        if (sig.sigma_toa > 0.0) toa += sig.sigma_toa * n_toa;
        out.rss.push_back(rss);
        out.toa.push_back(toa);
    }
    return out;
}

Scenario make_ring_scenario(const Position2D& target, double radius, int n_receivers,
                            const SignalParams& signal) {
    if (!(radius >= kMinDistance) || !std::isfinite(radius))
        throw InvalidParameterError("ring radius must be at least the minimum distance");
    if (n_receivers < 1)
        throw InvalidParameterError("ring needs at least one receiver");

    Scenario s;
    s.target = target;
    s.signal = signal;
    s.receivers.reserve(static_cast<std::size_t>(n_receivers));
    for (int k = 0; k < n_receivers; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n_receivers;
        s.receivers.push_back({target.x + radius * std::cos(angle),
                               target.y + radius * std::sin(angle)});
    }
    s.validate();
    return s;
}

}  // namespace rsstoa
