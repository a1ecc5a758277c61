#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwdint/errors.hpp"
#include "fwdint/integrals.hpp"
#include "fwdint/process.hpp"

namespace fwdint {

/// Adapted matrix drift A(t, omega) for the non-autonomous linear equation
/// dU = A(t) U dt + G(t) dW. `commuting` declares that the values A(t)
/// commute with each other, enabling the exponential-of-integral form of
/// the evolution family.
struct DriftSpec {
    long dim = 1;
    bool commuting = true;
    double stability_bound = 0.0;  // spectral bound, for step-size sanity
    std::function<Eigen::MatrixXd(long j, const BrownianBundle& w)> eval;
};

/// Two-parameter solution operator S(t_i, t_j), i >= j, of U' = A(t) U.
///
/// Two representations: commuting drifts use S(t,s) = exp(int_s^t A) through
/// prefix integrals; the general case is the time-ordered product of
/// per-cell exponentials exp(A(t_j) dt), a first-order Magnus scheme. Both
/// satisfy S(t,t) = Id and the cocycle relation by construction.
struct EvolutionFamily {
    TimeGrid grid;
    bool commuting = true;
    std::vector<Eigen::MatrixXd> drift;         // A(t_j), j = 0..N-1
    std::vector<Eigen::MatrixXd> cell_exp;      // exp(A(t_j) dt)
    std::vector<Eigen::MatrixXd> drift_prefix;  // sum_{l<j} A(t_l) dt, j = 0..N

    long dim() const { return drift.empty() ? 0 : drift.front().rows(); }

    /// S(t_i, t_j). The commuting branch is exact for constant and diagonal
    /// drifts; the product branch costs O(i - j) multiplies.
    Eigen::MatrixXd propagator(long i, long j) const {
        if (j > i) throw std::invalid_argument("propagator: need j <= i");
        if (i == j) return Eigen::MatrixXd::Identity(dim(), dim());
        if (commuting) return (drift_prefix[i] - drift_prefix[j]).exp();
        Eigen::MatrixXd s = cell_exp[i - 1];
        for (long l = i - 2; l >= j; --l) s = s * cell_exp[l];
        return s;
    }
};

/// Evaluate the drift along a path and assemble the evolution family.
inline EvolutionFamily build_family(const DriftSpec& a, const TimeGrid& grid,
                                    const BrownianBundle& w) {
    if (!same_grid(grid, w.grid))
        throw std::invalid_argument("build_family: grid and bundle disagree");
    EvolutionFamily fam;
    fam.grid = grid;
    fam.commuting = a.commuting;
    const long N = grid.steps;
    fam.drift.resize(N);
    fam.cell_exp.resize(N);
    fam.drift_prefix.resize(N + 1);
    fam.drift_prefix[0] = Eigen::MatrixXd::Zero(a.dim, a.dim);
    for (long j = 0; j < N; ++j) {
        Eigen::MatrixXd aj = a.eval(j, w);
        if (aj.rows() != a.dim || aj.cols() != a.dim || !aj.allFinite())
            throw EvaluationError("build_family: bad drift value at node " + std::to_string(j));
        fam.cell_exp[j] = (aj * grid.dt).exp();
        fam.drift_prefix[j + 1] = fam.drift_prefix[j] + aj * grid.dt;
        fam.drift[j] = std::move(aj);
    }
    return fam;
}

/// Forward stochastic convolution, computed through the representation
///
///     U(t_i) = S(t_i, 0) J(t_i) - sum_{j<i} S(t_i, t_j) A(t_j) [J(t_i) - J(t_j)] dt,
///
/// where J = ito_path(G, W) and the bracket realizes I(1_{[s,t]} G) windowed
/// at t_i. The propagators along each row are built incrementally from the
/// per-cell exponentials, O(N^2) in total. With A = 0 the sum vanishes and
/// U is exactly the Ito path.
inline VectorPath forward_convolution(const DriftSpec& a, const OperatorProcess& g,
                                      const BrownianBundle& w) {
    if (!g.adapted)
        throw AdaptednessError("forward_convolution: integrand must be adapted");
    const EvolutionFamily fam = build_family(a, g.grid, w);
    if (fam.dim() != g.rows())
        throw std::invalid_argument("forward_convolution: drift dimension " +
                                    std::to_string(fam.dim()) + " does not match integrand rows " +
                                    std::to_string(g.rows()));
    const VectorPath j_path = ito_path(g, w);
    const long N = g.grid.steps;
    const double dt = g.grid.dt;
    VectorPath u;
    u.grid = g.grid;
    u.values.resize(N + 1, g.rows());
    u.values.row(0).setZero();
    if (g.rows() == 1) {
        // scalar fast path; the O(N^2) row loops dominate at N ~ 2^12
        std::vector<double> e(N), a(N), jv(N + 1);
        for (long j = 0; j < N; ++j) {
            e[j] = fam.cell_exp[j](0, 0);
            a[j] = fam.drift[j](0, 0);
        }
        for (long i = 0; i <= N; ++i) jv[i] = j_path.values(i, 0);
        for (long i = 1; i <= N; ++i) {
            const double ji = jv[i];
            double s = 1.0, acc = 0.0;
            for (long j = i - 1; j >= 0; --j) {
                s *= e[j];
                acc += s * (a[j] * (ji - jv[j])) * dt;
            }
            u.values(i, 0) = s * ji - acc;
        }
        return u;
    }
    Eigen::MatrixXd s(fam.dim(), fam.dim());
    Eigen::MatrixXd s_next(fam.dim(), fam.dim());
    for (long i = 1; i <= N; ++i) {
        const Eigen::VectorXd ji = j_path.values.row(i).transpose();
        s.setIdentity();
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.rows());
        for (long j = i - 1; j >= 0; --j) {
            s_next.noalias() = s * fam.cell_exp[j];  // now S(t_i, t_j)
            s.swap(s_next);
            acc.noalias() += s * (fam.drift[j] * (ji - j_path.values.row(j).transpose())) * dt;
        }
        u.values.row(i) = (s * ji - acc).transpose();
    }
    return u;
}

/// Euler-Maruyama oracle for dU = A(t) U dt + G(t) dW, U(0) = 0:
///
///     U(t_{j+1}) = U(t_j) + A(t_j) U(t_j) dt + G(t_j) dW_j.
///
/// The standard adapted scheme; serves as the independent check of the
/// forward convolution wherever both exist.
inline VectorPath euler_maruyama(const DriftSpec& a, const OperatorProcess& g,
                                 const BrownianBundle& w) {
    if (!g.adapted)
        throw AdaptednessError("euler_maruyama: integrand must be adapted");
    const long N = g.grid.steps;
    const double dt = g.grid.dt;
    VectorPath u;
    u.grid = g.grid;
    u.values.resize(N + 1, g.rows());
    Eigen::VectorXd state = Eigen::VectorXd::Zero(g.rows());
    u.values.row(0) = state.transpose();
    constexpr double overflow_guard = 1e12;
    for (long j = 0; j < N; ++j) {
        const Eigen::MatrixXd aj = a.eval(j, w);
        const Eigen::VectorXd dw = (w.values.row(j + 1) - w.values.row(j)).transpose();
        state += aj * state * dt + g.values[j] * dw;
        if (!state.allFinite() || state.norm() > overflow_guard)
            throw StabilityError("euler_maruyama: state left the overflow guard at node " +
                                 std::to_string(j + 1) + "; reduce dt or the drift stiffness");
        u.values.row(j + 1) = state.transpose();
    }
    return u;
}

} // namespace fwdint
