#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "fwdint/integrals.hpp"
#include "fwdint/process.hpp"

namespace fwdint {

/// Pointwise multiplier M : [0,T] -> L(X, Y), possibly non-adapted and with
/// a power singularity of the derivative at the terminal time:
/// |M'(t)| <= C (T-t)^{-delta}, delta in [0, 3/2).
///
/// The derivative is supplied analytically, never finite-differenced: near
/// T the singularity makes differencing hopeless, and every preset has a
/// closed-form derivative anyway. check_derivative() guards against typos
/// away from the terminal time.
struct MultiplierSpec {
    long rows = 1;  // d' (output dimension)
    long cols = 1;  // d  (input dimension = integrand rows)
    double delta = 0.0;
    bool adapted = false;
    bool w_dependent = false;            // evaluator reads the Brownian path
    bool value_singular_at_terminal = false;  // M itself blows up at t = T
    std::function<Eigen::MatrixXd(double t, const BrownianBundle* w)> value;
    std::function<Eigen::MatrixXd(double t, const BrownianBundle* w)> derivative;
};

inline void validate_multiplier(const MultiplierSpec& m) {
    if (!(m.delta >= 0.0) || !(m.delta < 1.5))
        throw std::invalid_argument("multiplier: delta = " + std::to_string(m.delta) +
                                    " must lie in [0, 3/2)");
    if (!m.value || !m.derivative)
        throw std::invalid_argument("multiplier: value and derivative evaluators are required");
}

/// Central-difference cross-check of the analytic derivative at nodes
/// t <= T/2, where everything is smooth. Returns the worst relative
/// mismatch; presets are expected to stay below 1e-6.
inline double check_derivative(const MultiplierSpec& m, const TimeGrid& grid,
                               const BrownianBundle* w) {
    validate_multiplier(m);
    const double h = 1e-5 * grid.horizon;
    double worst = 0.0;
    for (long j = 1; j <= grid.steps / 2; j += std::max<long>(1, grid.steps / 16)) {
        const double t = grid.node(j);
        const Eigen::MatrixXd fd = (m.value(t + h, w) - m.value(t - h, w)) / (2.0 * h);
        const Eigen::MatrixXd an = m.derivative(t, w);
        const double scale = an.norm() + 1.0;
        worst = std::max(worst, (fd - an).norm() / scale);
    }
    return worst;
}

/// Residual of the deterministic integration-by-parts identity on the index
/// window [a_idx, b_idx):
///
///     int_a^b M f ds  vs  M(a) F(a) + int_a^b M'(s) F(s) ds,
///     F(t) = int_t^b f ds,
///
/// both sides by left-point sums, F by suffix sums. Requires a smooth
/// (delta = 0) path-independent multiplier; with M = Id the residual is an
/// exact telescoping zero.
inline double deterministic_ibp_residual(const MultiplierSpec& m, const VectorPath& f,
                                         long a_idx, long b_idx) {
    validate_multiplier(m);
    if (m.w_dependent)
        throw std::invalid_argument(
            "deterministic_ibp_residual: multiplier must not depend on the Brownian path");
    if (m.delta != 0.0)
        throw std::invalid_argument("deterministic_ibp_residual: multiplier must be smooth (delta = 0)");
    const long N = f.grid.steps;
    if (a_idx < 0 || a_idx >= b_idx || b_idx > N)
        throw std::invalid_argument("deterministic_ibp_residual: bad window");
    const double dt = f.grid.dt;

    Eigen::VectorXd lhs = Eigen::VectorXd::Zero(m.rows);
    for (long j = a_idx; j < b_idx; ++j)
        lhs += m.value(f.grid.node(j), nullptr) * f.values.row(j).transpose() * dt;

    // F(t_j) = sum_{i >= j} f(t_i) dt, accumulated from the right
    Eigen::VectorXd tail = Eigen::VectorXd::Zero(f.dim());
    Eigen::VectorXd rhs_int = Eigen::VectorXd::Zero(m.rows);
    Eigen::VectorXd f_at_a = Eigen::VectorXd::Zero(f.dim());
    for (long j = b_idx - 1; j >= a_idx; --j) {
        tail += f.values.row(j).transpose() * dt;
        rhs_int += m.derivative(f.grid.node(j), nullptr) * tail * dt;
        if (j == a_idx) f_at_a = tail;
    }
    const Eigen::VectorXd rhs = m.value(f.grid.node(a_idx), nullptr) * f_at_a + rhs_int;
    return (lhs - rhs).norm();
}

namespace detail {

/// Cell weights for the singular outer integral sum_j M'(t_j) tail_j w_j.
///
/// The integrand is factored as [(T-s)^{-delta}] x [slowly varying], and the
/// singular factor is integrated in closed form per cell:
///
///     w_j = (T-t_j)^delta * int_{t_j}^{t_{j+1}} (T-s)^{-delta} ds.
///
/// The terminal cell of a delta >= 1 multiplier has an infinite plain
/// weight; there the tail integral's Hoelder decay (T-s)^theta is folded
/// into the closed form instead, giving dt / (1 + theta - delta), finite
/// precisely under the compatibility condition 1 + theta - delta > 0.
/// Outside that range no finite principled weight exists and the terminal
/// cell is dropped; callers flag such runs as outside the supported regime.
inline double singular_cell_weight(const TimeGrid& grid, long j, double delta, double theta) {
    const double T = grid.horizon;
    const double dt = grid.dt;
    if (delta == 0.0) return dt;
    if (j == grid.steps - 1) {
        const double denom = 1.0 + theta - delta;
        return denom > 0.0 ? dt / denom : 0.0;
    }
    const double a = T - grid.node(j);
    const double b = T - grid.node(j + 1);
    double cell;
    if (delta == 1.0) {
        cell = std::log(a / b);
    } else {
        cell = (std::pow(a, 1.0 - delta) - std::pow(b, 1.0 - delta)) / (1.0 - delta);
    }
    return std::pow(a, delta) * cell;
}

} // namespace detail

/// Right-hand side of the forward integration-by-parts representation:
///
///     M(0) I(G) + sum_j M'(t_j) * I(1_{[t_j,T]} G) * w_j,
///
/// with the singular cell weights above. theta is the assumed Hoelder decay
/// exponent of the tail integral (alpha - 1/p from the norm spec in use);
/// it only enters the terminal cell and may be left at 0 whenever delta < 1.
inline Eigen::VectorXd stochastic_ibp_rhs(const MultiplierSpec& m, const OperatorProcess& g,
                                          const BrownianBundle& w, double theta = 0.0) {
    validate_multiplier(m);
    if (m.cols != g.rows())
        throw std::invalid_argument("stochastic_ibp_rhs: multiplier expects integrand dimension " +
                                    std::to_string(m.cols) + ", got " + std::to_string(g.rows()));
    const VectorPath tail = tail_integrals(g, w);
    const long N = g.grid.steps;
    Eigen::VectorXd acc = m.value(0.0, &w) * tail.values.row(0).transpose();  // M(0) I(G)
    for (long j = 0; j < N; ++j) {
        const double wj = detail::singular_cell_weight(g.grid, j, m.delta, theta);
        acc += m.derivative(g.grid.node(j), &w) * tail.values.row(j).transpose() * wj;
    }
    return acc;
}

/// Materialize the product process (MG)(t_j) = M(t_j) G(t_j) for the forward
/// side of the comparison. Non-adapted unless both factors are adapted.
inline OperatorProcess multiplier_product(const MultiplierSpec& m, const OperatorProcess& g,
                                          const BrownianBundle& w) {
    if (m.cols != g.rows())
        throw std::invalid_argument("multiplier_product: dimension mismatch");
    OperatorProcess out;
    out.grid = g.grid;
    out.adapted = m.adapted && g.adapted;
    out.values.resize(g.values.size());
    const long N = g.grid.steps;
    for (long j = 0; j < g.node_count(); ++j) {
        if (j == N && m.value_singular_at_terminal) {
            out.values[j] = Eigen::MatrixXd::Zero(m.rows, g.cols());
            continue;
        }
        out.values[j] = m.value(g.grid.node(j), &w) * g.values[j];
    }
    return out;
}

/// Relative residual between the forward approximant of MG and the
/// integration-by-parts representation:
///
///     |I^-(MG, n) - RHS| / (|RHS| + floor).
inline double ibp_residual(const MultiplierSpec& m, const OperatorProcess& g,
                           const BrownianBundle& w, long n, double theta = 0.0) {
    const OperatorProcess mg = multiplier_product(m, g, w);
    const Eigen::VectorXd lhs = forward_approx(mg, w, n);
    const Eigen::VectorXd rhs = stochastic_ibp_rhs(m, g, w, theta);
    const double floor = std::numeric_limits<double>::min();
    return (lhs - rhs).norm() / (rhs.norm() + floor);
}

} // namespace fwdint
