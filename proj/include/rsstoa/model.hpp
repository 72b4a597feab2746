#pragma once

#include <cstdint>
#include <vector>

namespace rsstoa {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact

// Smallest target-receiver distance the path-loss model is evaluated at.
inline constexpr double kMinDistance = 1e-3;  // m

struct Position2D {
    double x = 0.0;
    double y = 0.0;

    bool is_finite() const;
    friend bool operator==(const Position2D&, const Position2D&) = default;
};

struct SignalParams {
    double p0_true = -60.0;     // dBm at d0
    double beta = 3.0;          // path-loss exponent
    double d0 = 1.0;            // m
    double sigma_rss = 6.0;     // dB
    double sigma_toa = 1.0e-7;  // s
    double tau_true = 4.5e-6;   // s, transmitter clock bias

    void validate() const;
};

struct Scenario {
    Position2D target;
    std::vector<Position2D> receivers;
    SignalParams signal;

    // Throws InvalidParameterError or DegenerateGeometryError.
    void validate() const;
};

// rss[i] and toa[i] belong to receiver i of the scenario they were drawn for.
struct MeasurementSet {
    std::vector<double> rss;  // dBm
    std::vector<double> toa;  // s

    std::size_t size() const { return rss.size(); }
    void validate(std::size_t n_receivers) const;
    friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;
};

double distance(const Position2D& a, const Position2D& b);

// Noise-free log-distance path-loss RSS. Throws DegenerateGeometryError when
// the two points are closer than kMinDistance.
double rss_mean(const Position2D& target, const Position2D& rx, double p0, double beta,
                double d0);

double toa_mean(const Position2D& target, const Position2D& rx, double tau);

// Deterministic in `seed`: one mt19937_64 stream, receivers in order, RSS draw
// before TOA draw for each receiver.
MeasurementSet sample_measurements(const Scenario& scenario, std::uint64_t seed);

// n receivers evenly spaced on a circle around `target`, the first at angle 0.
Scenario make_ring_scenario(const Position2D& target, double radius, int n_receivers,
                            const SignalParams& signal);

}  // namespace rsstoa
