#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwdint/integrals.hpp"
#include "fwdint/process.hpp"

namespace fwdint {

/// Exponent triple used throughout the convergence studies: smoothness
/// alpha of the path norm, integrability p, and the weight exponent beta
/// of the V-space. Convergence runs require 0 < alpha < beta < 1/2.
struct NormSpec {
    double alpha = 0.3;
    double p = 4.0;
    double beta = 0.4;
};

namespace detail {

inline void check_p(double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("integrability p must be >= 1, got " + std::to_string(p));
}

/// |x|^p with a multiply chain for small integer p; pow() dominates the
/// O(N^2) kernels otherwise.
struct PowP {
    double p;
    long ip;
    bool integral;
    explicit PowP(double p_) : p(p_) {
        ip = std::lround(p_);
        integral = (static_cast<double>(ip) == p_) && ip >= 1 && ip <= 8;
    }
    double operator()(double x) const {
        if (!integral) return std::pow(std::abs(x), p);
        double ax = std::abs(x), r = 1.0;
        for (long k = 0; k < ip; ++k) r *= ax;
        return r;
    }
};

inline void check_beta(double beta) {
    if (!(beta >= 0.0) || !(beta < 0.5))
        throw std::invalid_argument("weight exponent beta = " + std::to_string(beta) +
                                    " must lie in [0, 1/2); the weighted norm diverges otherwise");
}

/// Row norms of the first N rows (left-endpoint cells of [0, T]).
inline Eigen::VectorXd cell_norms(const VectorPath& f) {
    const long N = f.grid.steps;
    return f.values.topRows(N).rowwise().norm();
}

} // namespace detail

/// L^p(0,T) norm, left-endpoint cells: (sum_j |f(t_j)|^p dt)^{1/p}.
inline double lp_norm(const VectorPath& f, double p) {
    detail::check_p(p);
    const long N = f.grid.steps;
    const detail::PowP pw(p);
    const Eigen::VectorXd r = detail::cell_norms(f);
    double acc = 0.0;
    for (long j = 0; j < N; ++j) acc += pw(r[j]) * f.grid.dt;
    return std::pow(acc, 1.0 / p);
}

/// Gagliardo seminorm of smoothness alpha and integrability p:
///
///     ( sum_{i != j} |f(t_i) - f(t_j)|^p |t_i - t_j|^{-alpha p - 1} dt^2 )^{1/p}
///
/// over off-diagonal cell pairs. The omitted diagonal contributes nothing
/// for piecewise-constant data; values approach the continuum from below
/// under refinement for smooth f. O(N^2).
inline double sobolev_seminorm(const VectorPath& f, double alpha, double p) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("sobolev_seminorm: alpha must lie in (0, 1), got " +
                                    std::to_string(alpha));
    detail::check_p(p);
    const long N = f.grid.steps;
    const double dt = f.grid.dt;
    const detail::PowP pw(p);
    // kernel depends on |i - j| only: (delta dt)^{-alpha p - 1} dt^2
    std::vector<double> kernel(N);
    for (long d = 1; d < N; ++d)
        kernel[d] = std::pow(static_cast<double>(d) * dt, -alpha * p - 1.0) * dt * dt;
    double acc = 0.0;
    if (f.dim() == 1) {
        const double* x = f.values.col(0).data();
        for (long d = 1; d < N; ++d) {
            double band = 0.0;
            for (long i = 0; i + d < N; ++i) band += pw(x[i + d] - x[i]);
            acc += 2.0 * band * kernel[d];
        }
    } else {
        for (long d = 1; d < N; ++d) {
            double band = 0.0;
            for (long i = 0; i + d < N; ++i)
                band += pw((f.values.row(i + d) - f.values.row(i)).norm());
            acc += 2.0 * band * kernel[d];
        }
    }
    return std::pow(acc, 1.0 / p);
}

/// H\"older seminorm: max over grid pairs of |f(t_i) - f(t_j)| / |t_i - t_j|^alpha,
/// all nodes 0..N. Exact on the grid, O(N^2).
inline double holder_seminorm(const VectorPath& f, double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("holder_seminorm: alpha must lie in (0, 1]");
    const long N = f.grid.steps;
    const double dt = f.grid.dt;
    double best = 0.0;
    for (long d = 1; d <= N; ++d) {
        const double denom = std::pow(static_cast<double>(d) * dt, alpha);
        for (long i = 0; i + d <= N; ++i) {
            const double q = (f.values.row(i + d) - f.values.row(i)).norm() / denom;
            if (q > best) best = q;
        }
    }
    return best;
}

/// Weighted Hilbert-Schmidt norm of G over the index window [a_idx, b_idx),
/// with the weight (t - r)^{-2 beta} centered at t = t_{t_idx}:
///
///     ( sum_{j=a}^{b-1} |G(r_j)|_HS^2 * w_j )^{1/2},
///     w_j = [ (t - r_j)^{1-2b} - (t - r_{j+1})^{1-2b} ] / (1 - 2b).
///
/// The weight is integrated in closed form per cell against the
/// piecewise-constant data, so the singular cell at r = t is exact.
/// beta = 0 reduces to the plain L^2-HS norm.
inline double hs_gamma_norm(const OperatorProcess& g, long a_idx, long b_idx,
                            double beta, long t_idx) {
    detail::check_beta(beta);
    const long N = g.grid.steps;
    if (a_idx < 0 || a_idx > b_idx || b_idx > t_idx || t_idx > N)
        throw std::invalid_argument("hs_gamma_norm: need 0 <= a_idx <= b_idx <= t_idx <= N");
    const double dt = g.grid.dt;
    const double q = 1.0 - 2.0 * beta;
    double acc = 0.0;
    for (long j = a_idx; j < b_idx; ++j) {
        const double up = std::pow(static_cast<double>(t_idx - j) * dt, q);
        const double dn = std::pow(static_cast<double>(t_idx - j - 1) * dt, q);
        const double w = (up - dn) / q;
        acc += g.values[j].squaredNorm() * w;
    }
    return std::sqrt(acc);
}

/// V-space norm
///
///     ||G||_{V^{beta,p}} = ( sum_{i=1}^{N} hs_gamma_norm(G, 0, i, beta, i)^p dt )^{1/p},
///
/// the outer Riemann sum evaluated at the nodes t_1..t_N (the inner norm at
/// t_0 is empty). O(N^2) with the weight table shared across rows.
inline double v_norm(const OperatorProcess& g, double beta, double p) {
    detail::check_beta(beta);
    detail::check_p(p);
    const long N = g.grid.steps;
    const double dt = g.grid.dt;
    const double q = 1.0 - 2.0 * beta;
    std::vector<double> pw(N + 1);
    for (long d = 0; d <= N; ++d) pw[d] = std::pow(static_cast<double>(d) * dt, q);
    std::vector<double> hs_sq(N);
    for (long j = 0; j < N; ++j) hs_sq[j] = g.values[j].squaredNorm();
    const double half_p = p / 2.0;
    const long half_ip = std::lround(half_p);
    const bool half_integral = static_cast<double>(half_ip) == half_p && half_ip >= 1 && half_ip <= 4;
    double outer = 0.0;
    for (long i = 1; i <= N; ++i) {
        double inner = 0.0;
        const double* w0 = pw.data();
        for (long j = 0; j < i; ++j)
            inner += hs_sq[j] * (w0[i - j] - w0[i - j - 1]);
        inner /= q;
        double term;
        if (half_integral) {
            term = inner;
            for (long k = 1; k < half_ip; ++k) term *= inner;
        } else {
            term = std::pow(inner, half_p);
        }
        outer += term * dt;
    }
    return std::pow(outer, 1.0 / p);
}

/// p = 2 specialization of the V-norm through the weighted-measure identity:
/// exchanging the two integrals collapses the double sum to
///
///     ( (1-2b)^{-1} sum_j |G(r_j)|_HS^2 * dt * (T - r_j)^{1-2b} )^{1/2},
///
/// since the inner cell weights telescope across the outer nodes. Agrees
/// with v_norm(G, beta, 2) up to roundoff and serves as its independent
/// O(N) cross-check.
inline double v_norm_weighted(const OperatorProcess& g, double beta) {
    detail::check_beta(beta);
    const long N = g.grid.steps;
    const double dt = g.grid.dt;
    const double q = 1.0 - 2.0 * beta;
    double acc = 0.0;
    for (long j = 0; j < N; ++j) {
        const double weight = dt * std::pow(g.grid.horizon - g.grid.node(j), q);
        acc += g.values[j].squaredNorm() * weight;
    }
    return std::sqrt(acc / q);
}

} // namespace fwdint
