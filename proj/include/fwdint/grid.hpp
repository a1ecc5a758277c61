#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "fwdint/errors.hpp"

namespace fwdint {

/// Uniform grid on [0, T] with an extra lookahead margin past T.
///
/// Nodes are t_j = j*dt for j = 0..N+lookahead_steps, dt = T/N. The margin
/// exists so that shifted increments W(t + 1/n) - W(t) stay on stored nodes;
/// consumers must request lookahead_steps*dt at least as large as the
/// largest shift they will use.
struct TimeGrid {
    double horizon = 1.0;   // T
    long steps = 2;         // N
    long lookahead_steps = 0;
    double dt = 0.5;

    double node(long j) const { return static_cast<double>(j) * dt; }
    long last_index() const { return steps + lookahead_steps; }
    long node_count() const { return steps + lookahead_steps + 1; }
};

inline TimeGrid make_grid(double T, long N, long lookahead_steps = 0) {
    if (!(T > 0.0))
        throw std::invalid_argument("make_grid: horizon T must be positive, got " + std::to_string(T));
    if (N < 2)
        throw std::invalid_argument("make_grid: need at least 2 steps, got " + std::to_string(N));
    if (lookahead_steps < 0)
        throw std::invalid_argument("make_grid: lookahead_steps must be >= 0");
    TimeGrid g;
    g.horizon = T;
    g.steps = N;
    g.lookahead_steps = lookahead_steps;
    g.dt = T / static_cast<double>(N);
    return g;
}

inline bool same_grid(const TimeGrid& a, const TimeGrid& b) {
    return a.horizon == b.horizon && a.steps == b.steps &&
           a.lookahead_steps == b.lookahead_steps;
}

/// Number of grid steps in the regularization shift 1/n.
///
/// The shift must be a whole number of steps, L = N/(n*T); anything else is
/// rejected rather than silently interpolated, so that the discrete
/// rearrangement identities stay exact.
inline long aligned_lag(const TimeGrid& grid, long n) {
    if (n < 1) throw std::invalid_argument("aligned_lag: regularization index n must be >= 1");
    const double exact = static_cast<double>(grid.steps) / (static_cast<double>(n) * grid.horizon);
    const long lag = std::lround(exact);
    if (lag < 1 || std::abs(static_cast<double>(lag) * static_cast<double>(n) * grid.horizon -
                            static_cast<double>(grid.steps)) > 1e-9 * static_cast<double>(grid.steps)) {
        throw AlignmentError(
            "aligned_lag: N/(n*T) = " + std::to_string(exact) +
            " is not a positive integer; n*T must divide N exactly");
    }
    return lag;
}

} // namespace fwdint
