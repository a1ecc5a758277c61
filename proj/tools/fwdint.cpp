// Command-line front end: run experiments from sectioned key=value config
// files and persist the reports.
//
// Exit codes: 0 success, 1 config validation failure, 2 execution failure,
// 3 identity-suite residual above threshold.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fwdint/config.hpp"
#include "fwdint/report_io.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int do_validate(const std::string& path) {
    const fwdint::ConfigParseResult result = fwdint::parse_config_file(path);
    if (!result.ok()) {
        std::cerr << "config rejected (" << result.errors.size() << " problem"
                  << (result.errors.size() == 1 ? "" : "s") << "):\n";
        for (const auto& e : result.errors) std::cerr << "  " << e << "\n";
        return 1;
    }
    std::cout << "config ok: kind=" << fwdint::to_string(result.config.kind)
              << " N=" << result.config.N << " replicates=" << result.config.replicates << "\n";
    return 0;
}

int do_run(const std::string& path, const std::string& out_override, long replicates_override,
           long long seed_override, bool seed_given, long threads) {
    fwdint::ConfigParseResult result = fwdint::parse_config_file(path);
    if (!result.ok()) {
        std::cerr << "config rejected:\n";
        for (const auto& e : result.errors) std::cerr << "  " << e << "\n";
        return 1;
    }
    fwdint::ExperimentConfig cfg = result.config;
    if (!out_override.empty()) cfg.out_dir = out_override;
    else if (const char* env = std::getenv("FWDINT_OUT_DIR")) {
        if (cfg.out_dir == "out") cfg.out_dir = env;
    }
    if (replicates_override > 0) cfg.replicates = replicates_override;
    if (seed_given) cfg.seed = static_cast<std::uint64_t>(seed_override);

    try {
        const fwdint::RunReport report = fwdint::run_experiment(cfg, threads);
        fwdint::emit_report(report, cfg.out_dir);
        std::cout << "kind=" << report.kind << " replicates=" << report.replicates
                  << " wall_clock_ms=" << report.wall_clock_ms << "\n";
        for (const auto& s : report.summaries)
            std::cout << "n=" << s.n << " median=" << s.median << " mean=" << s.mean
                      << " q10=" << s.q10 << " q90=" << s.q90 << "\n";
        std::cout << "report written to " << cfg.out_dir << "\n";
        if (cfg.kind == fwdint::ExperimentKind::identities) {
            for (const auto& rec : report.records)
                for (const auto& e : rec.entries)
                    if (e.flags != "ok") {
                        std::cerr << "identity residual above threshold: replicate "
                                  << rec.replicate << " n=" << e.n << " (" << e.flags << ")\n";
                        return 3;
                    }
        }
        return 0;
    } catch (const std::exception& ex) {
        std::cerr << "execution failed: " << ex.what() << "\n";
        return 2;
    }
}

int do_presets() {
    std::string family;
    for (const auto& info : fwdint::preset_catalog()) {
        if (info.family != family) {
            family = info.family;
            std::cout << "[" << family << "]\n";
        }
        std::cout << "  " << info.name;
        if (!info.params.empty()) {
            std::cout << " (params:";
            for (const auto& p : info.params) std::cout << " " << p;
            std::cout << ")";
        }
        std::cout << "\n      " << info.summary << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"forward stochastic integration toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    long replicates_override = 0;
    long long seed_override = 0;
    bool seed_given = false;
    long threads = 1;

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "config file path")->required();
    run->add_option("--out", out_override, "override the output directory");
    run->add_option("--replicates", replicates_override, "override the replicate count");
    run->add_option("--seed", seed_override, "override the master seed")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--threads", threads, "worker threads (does not change results)");

    auto* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("config", config_path, "config file path")->required();

    app.add_subcommand("presets", "list process, multiplier and drift presets");
    app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("version")) {
        std::cout << "fwdint " << kVersion << "\n";
        return 0;
    }
    if (app.got_subcommand("presets")) return do_presets();
    if (app.got_subcommand("validate")) return do_validate(config_path);
    return do_run(config_path, out_override, replicates_override, seed_override, seed_given,
                  threads);
}
