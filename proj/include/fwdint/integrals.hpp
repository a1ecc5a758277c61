#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <string>

#include "fwdint/brownian.hpp"
#include "fwdint/errors.hpp"
#include "fwdint/grid.hpp"
#include "fwdint/process.hpp"

namespace fwdint {

/// Grid-sampled path t_i -> R^d. Row i is the value at node i.
struct VectorPath {
    TimeGrid grid;
    Eigen::MatrixXd values;  // (N+1) x d

    long dim() const { return values.cols(); }
};

namespace detail {

inline void require_ito_input(const OperatorProcess& g, const BrownianBundle& w) {
    if (!g.adapted)
        throw AdaptednessError(
            "ito_integral: integrand is not adapted; use the forward operations instead");
    if (g.cols() != w.m)
        throw std::invalid_argument("ito_integral: integrand has " + std::to_string(g.cols()) +
                                    " columns, bundle has m = " + std::to_string(w.m));
    if (!same_grid(g.grid, w.grid))
        throw std::invalid_argument("ito_integral: integrand and bundle live on different grids");
}

inline void require_forward_input(const OperatorProcess& g, const BrownianBundle& w, long lag) {
    if (g.cols() != w.m)
        throw std::invalid_argument("forward_approx: integrand has " + std::to_string(g.cols()) +
                                    " columns, bundle has m = " + std::to_string(w.m));
    if (!same_grid(g.grid, w.grid))
        throw std::invalid_argument("forward_approx: integrand and bundle live on different grids");
    if (lag > w.grid.lookahead_steps)
        throw AlignmentError("forward_approx: shift 1/n needs " + std::to_string(lag) +
                             " lookahead steps, grid has " +
                             std::to_string(w.grid.lookahead_steps));
}

} // namespace detail

/// Left-point Ito sum over [0, T]:
///
///     I(G) = sum_{j=0}^{N-1} G(t_j) dW_j,    dW_j in R^m.
///
/// Rejects non-adapted integrands: a left-point sum of a non-adapted process
/// is a number, but not an Ito integral.
inline Eigen::VectorXd ito_integral(const OperatorProcess& g, const BrownianBundle& w) {
    detail::require_ito_input(g, w);
    const long N = g.grid.steps;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.rows());
    for (long j = 0; j < N; ++j) {
        const Eigen::VectorXd dw =
            (w.values.row(j + 1) - w.values.row(j)).transpose();
        acc += g.values[j] * dw;
    }
    return acc;
}

/// J(G)(t_i) for all i, one O(N m d) prefix pass. The final row equals
/// ito_integral(G, W) bitwise: same terms, same order.
inline VectorPath ito_path(const OperatorProcess& g, const BrownianBundle& w) {
    detail::require_ito_input(g, w);
    const long N = g.grid.steps;
    VectorPath path;
    path.grid = g.grid;
    path.values.resize(N + 1, g.rows());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.rows());
    path.values.row(0) = acc.transpose();
    for (long j = 0; j < N; ++j) {
        const Eigen::VectorXd dw =
            (w.values.row(j + 1) - w.values.row(j)).transpose();
        acc += g.values[j] * dw;
        path.values.row(j + 1) = acc.transpose();
    }
    return path;
}

/// Regularized forward approximant
///
///     I^-(G, n) = sum_{k < min(n,m)} sum_{j=0}^{N-1}
///                     G(t_j) h_k * n * (W(t_j + 1/n) - W(t_j)) h_k * dt,
///
/// a left-point discretization of the n-shifted Riemann integral. No
/// adaptedness is required; the shift 1/n must align with the grid.
inline Eigen::VectorXd forward_approx(const OperatorProcess& g, const BrownianBundle& w, long n) {
    const long lag = aligned_lag(g.grid, n);
    detail::require_forward_input(g, w, lag);
    const long N = g.grid.steps;
    const long mn = std::min<long>(n, g.cols());
    const double scale = static_cast<double>(n) * g.grid.dt;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.rows());
    for (long j = 0; j < N; ++j) {
        const Eigen::VectorXd shift =
            (w.values.row(j + lag) - w.values.row(j)).head(mn).transpose();
        acc += scale * (g.values[j].leftCols(mn) * shift);
    }
    return acc;
}

/// J^-(G, n)(t_i) = I^-(G 1_{[0,t_i]}, n) for all i; prefix sums of the same
/// per-cell terms as forward_approx, so the final row matches it bitwise.
inline VectorPath forward_path(const OperatorProcess& g, const BrownianBundle& w, long n) {
    const long lag = aligned_lag(g.grid, n);
    detail::require_forward_input(g, w, lag);
    const long N = g.grid.steps;
    const long mn = std::min<long>(n, g.cols());
    const double scale = static_cast<double>(n) * g.grid.dt;
    VectorPath path;
    path.grid = g.grid;
    path.values.resize(N + 1, g.rows());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.rows());
    path.values.row(0) = acc.transpose();
    for (long j = 0; j < N; ++j) {
        const Eigen::VectorXd shift =
            (w.values.row(j + lag) - w.values.row(j)).head(mn).transpose();
        acc += scale * (g.values[j].leftCols(mn) * shift);
        path.values.row(j + 1) = acc.transpose();
    }
    return path;
}

/// s_i -> I(1_{[s_i, T]} G) = I(G) - J(G)(s_i). Row N is exactly zero and
/// row 0 is the full integral, by the prefix/suffix identity.
inline VectorPath tail_integrals(const OperatorProcess& g, const BrownianBundle& w) {
    VectorPath j_path = ito_path(g, w);
    const Eigen::RowVectorXd total = j_path.values.row(j_path.grid.steps);
    VectorPath tail;
    tail.grid = j_path.grid;
    tail.values = (-j_path.values).rowwise() + total;
    return tail;
}

} // namespace fwdint
