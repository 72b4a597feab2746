#pragma once

// Per-receiver pieces of the cost shared by cost() and the grid search, so
// both produce bit-identical values for the same candidate.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "rsstoa/error.hpp"
#include "rsstoa/objective.hpp"

namespace rsstoa::detail {

struct ReceiverTerms {
    double distance;    // d_i(theta)
    double path_loss;   // 10 beta log10(d_i / d0)
    double toa_weight;  // weight(d_i) / c^2
    double range_base;  // c T_i - d_i
};

inline ReceiverTerms receiver_terms(double x, double y, const Position2D& rx, double toa,
                                    double beta, double d0) {
    const double d = std::hypot(x - rx.x, y - rx.y);
    if (!(d >= kMinDistance))
        throw DegenerateGeometryError("candidate position closer than minimum distance to a receiver");
    return {d, 10.0 * beta * std::log10(d / d0), weight(d) / (kSpeedOfLight * kSpeedOfLight),
            kSpeedOfLight * toa - d};
}

// Same as receiver_terms but reports infeasibility instead of throwing.
inline bool try_receiver_terms(double x, double y, const Position2D& rx, double toa,
                               double beta, double d0, ReceiverTerms& out) {
    const double d = std::hypot(x - rx.x, y - rx.y);
    if (!(d >= kMinDistance)) return false;
    out = {d, 10.0 * beta * std::log10(d / d0), weight(d) / (kSpeedOfLight * kSpeedOfLight),
           kSpeedOfLight * toa - d};
    return true;
}

inline double receiver_cost(const ReceiverTerms& t, double rss, double p0, double b) {
    const double e_rss = rss - p0 + t.path_loss;
    const double e_toa = t.range_base - b;
    return e_rss * e_rss + t.toa_weight * e_toa * e_toa;
}

// Sums per-receiver contributions in ascending order so the total does not
// depend on receiver order.
class OrderedSum {
public:
    explicit OrderedSum(std::size_t n) : n_(n) {
        if (n_ > small_.size()) large_.resize(n_);
    }
    double& operator[](std::size_t i) { return data()[i]; }
    double total() {
        double* d = data();
        std::sort(d, d + n_);
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += d[i];
        return s;
    }

private:
    double* data() { return n_ > small_.size() ? large_.data() : small_.data(); }
    std::size_t n_;
    std::array<double, 8> small_{};
    std::vector<double> large_;
};

}  // namespace rsstoa::detail
