#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rfbmlab {

// Uniform grid 0 = t_0 < t_1 < ... < t_n = horizon.
struct TimeGrid {
    double horizon = 1.0;
    std::size_t n = 2;
    std::vector<double> points;

    static TimeGrid uniform(double horizon, std::size_t n) {
        if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (n < 2) throw std::invalid_argument("TimeGrid: need at least two panels");
        TimeGrid g;
        g.horizon = horizon;
        g.n = n;
        g.points.resize(n + 1);
        const double dt = horizon / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) g.points[i] = static_cast<double>(i) * dt;
        return g;
    }

    double dt() const { return horizon / static_cast<double>(n); }

    // index of the grid point matching t, or throws
    std::size_t index_of(double t) const {
        const double step = dt();
        const auto k = static_cast<std::size_t>(t / step + 0.5);
        if (k > n || std::fabs(t - points[k]) > 1e-9 * std::fmax(1.0, horizon))
            throw std::invalid_argument("TimeGrid: t is not a grid point");
        return k;
    }
};

struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;      // n+1 values, values[0] = 0
    std::vector<double> increments;  // n Brownian increments, variance dt each
    std::uint64_t seed = 0;
};

}  // namespace rfbmlab
