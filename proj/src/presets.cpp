#include "fwdint/presets.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace fwdint {

namespace {

double param_or(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

long iparam_or(const ParamMap& params, const std::string& key, long fallback) {
    return static_cast<long>(param_or(params, key, static_cast<double>(fallback)));
}

[[noreturn]] void unknown_preset(const std::string& family, const std::string& name) {
    throw std::invalid_argument("unknown " + family + " preset '" + name +
                                "'; run the presets subcommand for the catalog");
}

} // namespace

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = {
        {"constant", "process", "G = value (entrywise), deterministic", {"value", "d"}},
        {"linear", "process", "G(t) = slope * t (entrywise), deterministic", {"slope", "d"}},
        {"brownian_adapted", "process", "G(t) = W(t)h_1 in the first column, adapted", {}},
        {"brownian_terminal", "process", "G = W(T)h_1 in the first column, non-adapted constant",
         {}},
        {"power_singular", "process", "G(t) = (T-t)^(-1/2-eps), scalar, blows up at t = T",
         {"eps"}},
        {"matrix_smooth", "process", "d x m matrix of smooth bounded waves, deterministic",
         {"d"}},
        {"matrix_adapted", "process", "d x m matrix of bounded functions of W(t)h_k, adapted",
         {"d"}},
        {"constant", "multiplier", "M = value * I, deterministic, M' = 0", {"value", "dim"}},
        {"terminal_functional", "multiplier",
         "M = phi(W(T)h_1) * I, non-adapted, M' = 0; phi = 0 identity, 1 tanh", {"phi", "dim"}},
        {"singular_power", "multiplier",
         "M(s) = (T-s)^(1-delta) * I with |M'(s)| ~ (T-s)^(-delta)", {"delta", "dim"}},
        {"evolution_family", "multiplier",
         "M(s) = S(T, s) from the configured drift along the current path", {"dim"}},
        {"zero", "drift", "A = 0", {"dim"}},
        {"scalar", "drift", "A = a * I", {"a", "dim"}},
        {"diagonal", "drift", "A = diag(a0, a1, ...)", {"a0", "a1", "a2", "a3", "dim"}},
        {"stiff", "drift", "A = diag(-lambda, -lambda/2, ..., -lambda/dim)", {"lambda", "dim"}},
        {"random_adapted", "drift", "A(t) = a * tanh(W(t)h_1) * I, adapted and bounded",
         {"a", "dim"}},
    };
    return catalog;
}

ProcessSpec make_process_preset(const std::string& name, const ParamMap& params, long m) {
    ProcessSpec spec;
    spec.cols = m;
    if (name == "constant") {
        const double value = param_or(params, "value", 1.0);
        const long d = iparam_or(params, "d", 1);
        spec.kind = ProcessKind::deterministic;
        spec.rows = d;
        spec.eval = [value, d, m](long, const BrownianBundle&) {
            return Eigen::MatrixXd::Constant(d, m, value);
        };
        return spec;
    }
    if (name == "linear") {
        const double slope = param_or(params, "slope", 1.0);
        const long d = iparam_or(params, "d", 1);
        spec.kind = ProcessKind::deterministic;
        spec.rows = d;
        spec.eval = [slope, d, m](long j, const BrownianBundle& w) {
            return Eigen::MatrixXd::Constant(d, m, slope * w.grid.node(j));
        };
        return spec;
    }
    if (name == "brownian_adapted") {
        spec.kind = ProcessKind::adapted;
        spec.rows = 1;
        spec.eval = [m](long j, const BrownianBundle& w) {
            Eigen::MatrixXd v = Eigen::MatrixXd::Zero(1, m);
            v(0, 0) = w.values(j, 0);
            return v;
        };
        return spec;
    }
    if (name == "brownian_terminal") {
        spec.kind = ProcessKind::nonadapted;
        spec.rows = 1;
        spec.eval = [m](long, const BrownianBundle& w) {
            Eigen::MatrixXd v = Eigen::MatrixXd::Zero(1, m);
            v(0, 0) = w.values(w.grid.steps, 0);
            return v;
        };
        return spec;
    }
    if (name == "power_singular") {
        const double eps = param_or(params, "eps", 0.2);
        spec.kind = ProcessKind::deterministic;
        spec.rows = 1;
        spec.singular_at_terminal = true;
        spec.singular_exponent = 0.5 + eps;
        spec.eval = [eps, m](long j, const BrownianBundle& w) {
            Eigen::MatrixXd v = Eigen::MatrixXd::Zero(1, m);
            v(0, 0) = std::pow(w.grid.horizon - w.grid.node(j), -0.5 - eps);
            return v;
        };
        return spec;
    }
    if (name == "matrix_smooth") {
        const long d = iparam_or(params, "d", 3);
        spec.kind = ProcessKind::deterministic;
        spec.rows = d;
        spec.eval = [d, m](long j, const BrownianBundle& w) {
            const double t = w.grid.node(j);
            Eigen::MatrixXd v(d, m);
            for (long i = 0; i < d; ++i)
                for (long k = 0; k < m; ++k)
                    v(i, k) = std::sin((static_cast<double>(i) + 1.0) * t +
                                       static_cast<double>(k)) /
                              (1.0 + static_cast<double>(k));
            return v;
        };
        return spec;
    }
    if (name == "matrix_adapted") {
        const long d = iparam_or(params, "d", 3);
        spec.kind = ProcessKind::adapted;
        spec.rows = d;
        spec.eval = [d, m](long j, const BrownianBundle& w) {
            Eigen::MatrixXd v(d, m);
            for (long i = 0; i < d; ++i)
                for (long k = 0; k < m; ++k)
                    v(i, k) = std::tanh(w.values(j, k)) / (1.0 + static_cast<double>(i));
            return v;
        };
        return spec;
    }
    unknown_preset("process", name);
}

MultiplierSpec make_multiplier_preset(const std::string& name, const ParamMap& params,
                                      const TimeGrid& grid, const BrownianBundle* w,
                                      const DriftSpec* drift) {
    MultiplierSpec m;
    const long dim = iparam_or(params, "dim", 1);
    m.rows = dim;
    m.cols = dim;
    if (name == "constant") {
        const double value = param_or(params, "value", 1.0);
        m.adapted = true;
        m.value = [value, dim](double, const BrownianBundle*) {
            return Eigen::MatrixXd(value * Eigen::MatrixXd::Identity(dim, dim));
        };
        m.derivative = [dim](double, const BrownianBundle*) {
            return Eigen::MatrixXd(Eigen::MatrixXd::Zero(dim, dim));
        };
        return m;
    }
    if (name == "terminal_functional") {
        const double phi = param_or(params, "phi", 0.0);
        m.adapted = false;
        m.w_dependent = true;
        m.value = [phi, dim](double, const BrownianBundle* path) {
            if (path == nullptr)
                throw std::invalid_argument("terminal_functional multiplier needs a path");
            const double wt = path->values(path->grid.steps, 0);
            const double scale = phi == 0.0 ? wt : std::tanh(wt);
            return Eigen::MatrixXd(scale * Eigen::MatrixXd::Identity(dim, dim));
        };
        m.derivative = [dim](double, const BrownianBundle*) {
            return Eigen::MatrixXd(Eigen::MatrixXd::Zero(dim, dim));
        };
        return m;
    }
    if (name == "singular_power") {
        const double delta = param_or(params, "delta", 0.75);
        if (!(delta >= 0.0) || !(delta < 1.5))
            throw std::invalid_argument("singular_power: delta must lie in [0, 3/2)");
        const double T = grid.horizon;
        m.adapted = true;
        m.delta = delta;
        m.value_singular_at_terminal = delta >= 1.0;
        if (delta == 1.0) {
            m.value = [T, dim](double t, const BrownianBundle*) {
                return Eigen::MatrixXd(std::log(T - t) * Eigen::MatrixXd::Identity(dim, dim));
            };
            m.derivative = [T, dim](double t, const BrownianBundle*) {
                return Eigen::MatrixXd(-1.0 / (T - t) * Eigen::MatrixXd::Identity(dim, dim));
            };
        } else {
            m.value = [T, delta, dim](double t, const BrownianBundle*) {
                return Eigen::MatrixXd(std::pow(T - t, 1.0 - delta) *
                                       Eigen::MatrixXd::Identity(dim, dim));
            };
            m.derivative = [T, delta, dim](double t, const BrownianBundle*) {
                return Eigen::MatrixXd(-(1.0 - delta) * std::pow(T - t, -delta) *
                                       Eigen::MatrixXd::Identity(dim, dim));
            };
        }
        return m;
    }
    if (name == "evolution_family") {
        if (w == nullptr || drift == nullptr)
            throw std::invalid_argument(
                "evolution_family multiplier needs a drift spec and a sampled path");
        auto fam = std::make_shared<EvolutionFamily>(build_family(*drift, grid, *w));
        const long N = grid.steps;
        const double dt = grid.dt;
        m.rows = drift->dim;
        m.cols = drift->dim;
        m.adapted = false;
        m.w_dependent = true;
        m.value = [fam, N, dt](double t, const BrownianBundle*) {
            const long j = std::lround(t / dt);
            return fam->propagator(N, std::min(j, N));
        };
        m.derivative = [fam, N, dt](double t, const BrownianBundle*) {
            const long j = std::min<long>(std::lround(t / dt), N - 1);
            return Eigen::MatrixXd(-fam->propagator(N, j) * fam->drift[j]);
        };
        return m;
    }
    unknown_preset("multiplier", name);
}

DriftSpec make_drift_preset(const std::string& name, const ParamMap& params) {
    DriftSpec a;
    const long dim = iparam_or(params, "dim", 1);
    a.dim = dim;
    if (name == "zero") {
        a.eval = [dim](long, const BrownianBundle&) {
            return Eigen::MatrixXd(Eigen::MatrixXd::Zero(dim, dim));
        };
        return a;
    }
    if (name == "scalar") {
        const double value = param_or(params, "a", -1.0);
        a.stability_bound = std::abs(value);
        a.eval = [value, dim](long, const BrownianBundle&) {
            return Eigen::MatrixXd(value * Eigen::MatrixXd::Identity(dim, dim));
        };
        return a;
    }
    if (name == "diagonal") {
        Eigen::VectorXd diag(dim);
        for (long i = 0; i < dim; ++i)
            diag[i] = param_or(params, "a" + std::to_string(i), 0.0);
        a.stability_bound = diag.cwiseAbs().maxCoeff();
        a.eval = [diag](long, const BrownianBundle&) {
            return Eigen::MatrixXd(diag.asDiagonal());
        };
        return a;
    }
    if (name == "stiff") {
        const double lambda = param_or(params, "lambda", 64.0);
        Eigen::VectorXd diag(dim);
        for (long i = 0; i < dim; ++i) diag[i] = -lambda / static_cast<double>(i + 1);
        a.stability_bound = lambda;
        a.eval = [diag](long, const BrownianBundle&) {
            return Eigen::MatrixXd(diag.asDiagonal());
        };
        return a;
    }
    if (name == "random_adapted") {
        const double value = param_or(params, "a", 1.0);
        a.stability_bound = std::abs(value);
        a.eval = [value, dim](long j, const BrownianBundle& w) {
            return Eigen::MatrixXd(value * std::tanh(w.values(j, 0)) *
                                   Eigen::MatrixXd::Identity(dim, dim));
        };
        return a;
    }
    unknown_preset("drift", name);
}

} // namespace fwdint
