#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fwdint/grid.hpp"
#include "fwdint/philox.hpp"

namespace fwdint {

/// First m coordinates of a cylindrical Brownian motion on the extended grid.
///
/// values(j, k) = W(t_j) h_{k+1}; column k is an independent scalar Brownian
/// path. Values, not increments, are stored so that shifted lookups are a
/// single subtraction.
struct BrownianBundle {
    TimeGrid grid;
    long m = 1;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    Eigen::MatrixXd values;  // (N + lookahead + 1) x m
};

/// Sample the bundle. Pure function of (grid, m, seed, stream_id): the
/// increment at row j, column k is the Philox draw with index j*m + k,
/// so two calls with equal arguments are bitwise identical.
inline BrownianBundle sample_brownian(const TimeGrid& grid, long m,
                                      std::uint64_t seed, std::uint64_t stream_id) {
    if (m < 1)
        throw std::invalid_argument("sample_brownian: basis truncation m must be >= 1, got " +
                                    std::to_string(m));
    BrownianBundle w;
    w.grid = grid;
    w.m = m;
    w.seed = seed;
    w.stream_id = stream_id;
    const long rows = grid.node_count();
    w.values.resize(rows, m);
    const double step_sd = std::sqrt(grid.dt);
    for (long k = 0; k < m; ++k) w.values(0, k) = 0.0;
    for (long j = 0; j + 1 < rows; ++j) {
        for (long k = 0; k < m; ++k) {
            const std::uint64_t idx = static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(m) +
                                      static_cast<std::uint64_t>(k);
            w.values(j + 1, k) = w.values(j, k) + step_sd * normal_draw(seed, stream_id, idx);
        }
    }
    return w;
}

/// W(t_{j+lag}) h_{k+1} - W(t_j) h_{k+1}, exact difference of stored values.
/// k is zero-based (column index).
inline double shifted_increment(const BrownianBundle& w, long k, long j, long lag) {
    if (k < 0 || k >= w.m)
        throw std::out_of_range("shifted_increment: column " + std::to_string(k) + " out of range");
    if (j < 0 || lag < 0 || j + lag > w.grid.last_index())
        throw std::out_of_range("shifted_increment: node " + std::to_string(j + lag) +
                                " past extended grid end " + std::to_string(w.grid.last_index()));
    return w.values(j + lag, k) - w.values(j, k);
}

} // namespace fwdint
