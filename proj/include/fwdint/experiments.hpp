#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fwdint/norms.hpp"
#include "fwdint/presets.hpp"

namespace fwdint {

enum class ExperimentKind { converge, ibp, spde, norms, identities };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Everything a run needs. Parsed from the sectioned config file; threads
/// is a runtime knob passed separately because it must not change results.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::identities;
    double T = 1.0;
    long N = 1024;
    long m = 1;
    std::uint64_t seed = 12345;
    std::vector<long> n_list = {4, 16, 64};
    NormSpec norms;
    std::string process_preset = "constant";
    ParamMap process_params;
    std::string multiplier_preset = "constant";
    ParamMap multiplier_params;
    std::string drift_preset = "zero";
    ParamMap drift_params;
    long replicates = 100;
    std::string out_dir = "out";
};

struct ReplicateEntry {
    long n = 0;
    double error_norm = 0.0;
    double v_norm = 0.0;
    bool has_v_norm = false;
    std::string flags = "ok";
};

struct ReplicateRecord {
    long replicate = 0;
    std::uint64_t stream = 0;
    std::vector<ReplicateEntry> entries;
};

struct SummaryRow {
    long n = 0;
    double median = 0.0;
    double mean = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
    long count = 0;
};

struct RunReport {
    int schema_version = 1;
    std::string kind;
    std::string config_echo;
    long replicates = 0;
    double wall_clock_ms = 0.0;
    std::vector<ReplicateRecord> records;
    std::vector<SummaryRow> summaries;
};

struct SummaryStats {
    double median = 0.0;
    double mean = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
    long count = 0;
};

/// Order statistics with the lower-value convention: median and quantiles
/// are sorted[floor(q * (count-1))], no interpolation.
SummaryStats summarize(const std::vector<double>& samples);

/// Forward-vs-Ito path error in the W^{alpha,p} norm per replicate and n.
RunReport run_convergence(const ExperimentConfig& cfg, long threads = 1);

/// Integration-by-parts residuals per replicate and n.
RunReport run_ibp(const ExperimentConfig& cfg, long threads = 1);

/// Forward convolution vs Euler-Maruyama sup-norm relative difference.
RunReport run_spde(const ExperimentConfig& cfg, long threads = 1);

/// Weighted V-norm of the configured process across grid refinements
/// {N, 2N, 4N}; rows carry the grid size in the n column.
RunReport run_norm_study(const ExperimentConfig& cfg, long threads = 1);

/// Exact-identity checks (rearrangement, linearity, operator commutation,
/// locality, deterministic IBP, V-norm cross-check) on randomized inputs.
/// A residual above its threshold is a flagged row, not an exception.
RunReport run_identity_suite(const ExperimentConfig& cfg, long threads = 1);

/// Dispatch by cfg.kind.
RunReport run_experiment(const ExperimentConfig& cfg, long threads = 1);

/// Residual of the discrete rearrangement identity at one (G, W, n):
/// forward_approx against the smoothed process paired with the cell
/// increments on the extended grid, relative to the latter.
double fubini_residual(const OperatorProcess& g, const BrownianBundle& w, long n);

} // namespace fwdint
