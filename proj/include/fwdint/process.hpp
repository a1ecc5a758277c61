#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwdint/brownian.hpp"
#include "fwdint/errors.hpp"
#include "fwdint/grid.hpp"

namespace fwdint {

enum class ProcessKind { deterministic, adapted, nonadapted };

/// Rule for an operator-valued integrand G : [0,T] -> L(H, X), realized as a
/// d x m matrix per node. Adapted evaluators may only read W rows 0..j when
/// called at node j; that contract is tested, not enforced by types.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::deterministic;
    long rows = 1;  // d
    long cols = 1;  // m
    bool singular_at_terminal = false;  // blows up at t = T
    double singular_exponent = 0.0;     // |G(t)| ~ (T-t)^{-exponent}
    std::function<Eigen::MatrixXd(long j, const BrownianBundle& w)> eval;
};

/// Grid realization of G. values[j] = G(t_j), a d x m matrix. Mollified
/// processes live on the extended grid, so values.size() may exceed N+1.
struct OperatorProcess {
    TimeGrid grid;
    bool adapted = true;
    std::vector<Eigen::MatrixXd> values;

    long rows() const { return values.empty() ? 0 : values.front().rows(); }
    long cols() const { return values.empty() ? 0 : values.front().cols(); }
    long node_count() const { return static_cast<long>(values.size()); }
};

/// Evaluate a spec along a Brownian bundle.
///
/// A spec flagged singular at T is never evaluated there; the terminal node
/// is stored as zero, which no left-endpoint sum ever reads.
inline OperatorProcess materialize(const ProcessSpec& spec, const BrownianBundle& w) {
    if (spec.cols != w.m)
        throw std::invalid_argument("materialize: spec has " + std::to_string(spec.cols) +
                                    " columns but bundle carries m = " + std::to_string(w.m));
    OperatorProcess g;
    g.grid = w.grid;
    g.adapted = spec.kind != ProcessKind::nonadapted;
    const long N = w.grid.steps;
    g.values.resize(N + 1);
    for (long j = 0; j <= N; ++j) {
        if (spec.singular_at_terminal && j == N) {
            g.values[j] = Eigen::MatrixXd::Zero(spec.rows, spec.cols);
            continue;
        }
        Eigen::MatrixXd v = spec.eval(j, w);
        if (v.rows() != spec.rows || v.cols() != spec.cols)
            throw EvaluationError("materialize: evaluator returned wrong shape at node " +
                                  std::to_string(j));
        if (!v.allFinite())
            throw EvaluationError("materialize: non-finite value at node " + std::to_string(j) +
                                  " (t = " + std::to_string(w.grid.node(j)) + ")");
        g.values[j] = std::move(v);
    }
    return g;
}

/// 1_{[t_a, t_b)} G: zero the values outside the index window [a_idx, b_idx).
///
/// The terminal node is kept only by the full-right window (b_idx == N), so
/// restrict_window(G, 0, N) is the identity. No left-endpoint sum reads the
/// terminal node either way.
inline OperatorProcess restrict_window(const OperatorProcess& g, long a_idx, long b_idx) {
    const long N = g.grid.steps;
    if (a_idx < 0 || a_idx > b_idx || b_idx > N)
        throw std::invalid_argument("restrict_window: need 0 <= a_idx <= b_idx <= N, got [" +
                                    std::to_string(a_idx) + ", " + std::to_string(b_idx) + ")");
    OperatorProcess out;
    out.grid = g.grid;
    out.adapted = g.adapted;
    out.values.resize(g.values.size());
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    for (long j = 0; j < g.node_count(); ++j) {
        const bool keep = (j >= a_idx && j < b_idx) || (j == N && b_idx == N);
        out.values[j] = keep ? g.values[j] : zero;
    }
    return out;
}

/// P_n projection: zero the columns past the first n basis coordinates.
inline OperatorProcess truncate_basis(const OperatorProcess& g, long n) {
    if (n < 1) throw std::invalid_argument("truncate_basis: n must be >= 1");
    OperatorProcess out = g;
    const long keep = std::min(n, g.cols());
    for (auto& v : out.values)
        v.rightCols(v.cols() - keep).setZero();
    return out;
}

/// Causal mollification G_n = n 1_{[0,1/n]} * (1_{[0,T]} P_n G).
///
/// With lag L = N/(n*T), the value at node i is the left-endpoint quadrature
/// of n * integral of G over [t_i - 1/n, t_i]:
///
///     G_n(t_i) = n * dt * sum_{j = i-L}^{i-1} G(t_j),   0 <= j <= N-1,
///
/// columns truncated by P_n. The output lives on the extended grid up to
/// T + 1/n (index N + L) and ramps in over [0, 1/n] and out over
/// [T, T + 1/n].
inline OperatorProcess smooth(const OperatorProcess& g, long n) {
    const long L = aligned_lag(g.grid, n);
    const long N = g.grid.steps;
    OperatorProcess out;
    out.grid = g.grid;
    out.adapted = g.adapted;
    out.values.resize(N + L + 1);
    const long keep = std::min(n, g.cols());
    const double scale = static_cast<double>(n) * g.grid.dt;
    for (long i = 0; i <= N + L; ++i) {
        // window j in [i-L, i-1] intersected with the support [0, N-1];
        // summed afresh per node so that constant inputs reproduce exactly
        const long lo = std::max<long>(0, i - L);
        const long hi = std::min<long>(N - 1, i - 1);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(g.rows(), g.cols());
        for (long j = lo; j <= hi; ++j) acc += g.values[j];
        Eigen::MatrixXd v = scale * acc;
        v.rightCols(v.cols() - keep).setZero();
        out.values[i] = std::move(v);
    }
    return out;
}

} // namespace fwdint
