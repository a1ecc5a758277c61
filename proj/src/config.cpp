#include "fwdint/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fwdint {

namespace {

struct Entry {
    std::string key;
    std::string value;
    long line;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::optional<double> parse_double(const std::string& s) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::optional<long> parse_long(const std::string& s) {
    long value = 0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    std::uint64_t value = 0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const std::set<std::string>& known_sections() {
    static const std::set<std::string> s = {"grid",  "noise", "process", "multiplier",
                                            "drift", "norms", "run"};
    return s;
}

bool preset_exists(const std::string& family, const std::string& name) {
    for (const auto& info : preset_catalog())
        if (info.family == family && info.name == name) return true;
    return false;
}

bool preset_param_allowed(const std::string& family, const std::string& name,
                          const std::string& key) {
    for (const auto& info : preset_catalog())
        if (info.family == family && info.name == name)
            return std::find(info.params.begin(), info.params.end(), key) != info.params.end();
    return false;
}

} // namespace

ConfigParseResult parse_config_text(const std::string& text) {
    ConfigParseResult result;
    auto& errors = result.errors;
    auto& cfg = result.config;

    std::map<std::string, std::vector<Entry>> sections;
    {
        std::istringstream in(text);
        std::string line;
        std::string section;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']') {
                    errors.push_back("line " + std::to_string(line_no) +
                                     ": malformed section header '" + t + "'");
                    continue;
                }
                section = trim(t.substr(1, t.size() - 2));
                if (!known_sections().count(section)) {
                    errors.push_back("line " + std::to_string(line_no) + ": unknown section [" +
                                     section + "]");
                    section.clear();
                }
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                errors.push_back("line " + std::to_string(line_no) +
                                 ": expected 'key = value', got '" + t + "'");
                continue;
            }
            if (section.empty()) {
                errors.push_back("line " + std::to_string(line_no) +
                                 ": key outside of any section");
                continue;
            }
            sections[section].push_back(
                {trim(t.substr(0, eq)), trim(t.substr(eq + 1)), line_no});
        }
    }

    auto take = [&](const std::string& section,
                    const std::string& key) -> std::optional<Entry> {
        auto it = sections.find(section);
        if (it == sections.end()) return std::nullopt;
        for (const auto& e : it->second)
            if (e.key == key) return e;
        return std::nullopt;
    };
    auto numeric = [&](const std::string& section, const std::string& key,
                       double fallback) -> double {
        const auto e = take(section, key);
        if (!e) return fallback;
        const auto v = parse_double(e->value);
        if (!v) {
            errors.push_back("line " + std::to_string(e->line) + ": [" + section + "] " + key +
                             " = '" + e->value + "' is not a number");
            return fallback;
        }
        return *v;
    };
    auto integer = [&](const std::string& section, const std::string& key,
                       long fallback) -> long {
        const auto e = take(section, key);
        if (!e) return fallback;
        const auto v = parse_long(e->value);
        if (!v) {
            errors.push_back("line " + std::to_string(e->line) + ": [" + section + "] " + key +
                             " = '" + e->value + "' is not an integer");
            return fallback;
        }
        return *v;
    };

    // reject unknown keys per section, with line numbers
    static const std::map<std::string, std::set<std::string>> fixed_keys = {
        {"grid", {"T", "N"}},
        {"noise", {"m", "seed"}},
        {"norms", {"alpha", "p", "beta"}},
        {"run", {"kind", "n_list", "replicates", "out_dir"}},
    };
    for (const auto& [section, entries] : sections) {
        const bool preset_section =
            section == "process" || section == "multiplier" || section == "drift";
        std::string preset_name;
        if (preset_section) {
            for (const auto& e : entries)
                if (e.key == "preset") preset_name = e.value;
        }
        for (const auto& e : entries) {
            if (preset_section) {
                if (e.key == "preset") continue;
                if (!preset_name.empty() && preset_exists(section, preset_name) &&
                    !preset_param_allowed(section, preset_name, e.key)) {
                    errors.push_back("line " + std::to_string(e.line) + ": [" + section +
                                     "] unknown key '" + e.key + "' for preset '" + preset_name +
                                     "'");
                }
                continue;
            }
            const auto it = fixed_keys.find(section);
            if (it != fixed_keys.end() && !it->second.count(e.key))
                errors.push_back("line " + std::to_string(e.line) + ": [" + section +
                                 "] unknown key '" + e.key + "'");
        }
    }

    // [run] first: the kind picks the grid-size default
    if (const auto e = take("run", "kind")) {
        try {
            cfg.kind = experiment_kind_from_string(e->value);
        } catch (const std::exception& ex) {
            errors.push_back("line " + std::to_string(e->line) + ": " + ex.what());
        }
    } else {
        errors.push_back("[run] kind is required (converge | ibp | spde | norms | identities)");
    }

    cfg.T = numeric("grid", "T", 1.0);
    // identity suites are O(N) per check and default to a finer grid than
    // the O(N^2) norm-heavy studies
    const long default_n = cfg.kind == ExperimentKind::identities ? 4096 : 1024;
    cfg.N = integer("grid", "N", default_n);
    cfg.m = integer("noise", "m", 1);
    if (const auto e = take("noise", "seed")) {
        const auto v = parse_u64(e->value);
        if (!v)
            errors.push_back("line " + std::to_string(e->line) +
                             ": [noise] seed must be a non-negative 64-bit integer");
        else
            cfg.seed = *v;
    }
    cfg.norms.alpha = numeric("norms", "alpha", 0.3);
    cfg.norms.p = numeric("norms", "p", 4.0);
    cfg.norms.beta = numeric("norms", "beta", 0.4);
    cfg.replicates = integer("run", "replicates", 100);
    if (const auto e = take("run", "out_dir")) cfg.out_dir = e->value;

    if (const auto e = take("run", "n_list")) {
        cfg.n_list.clear();
        std::string item;
        std::istringstream items(e->value);
        while (std::getline(items, item, ',')) {
            const auto v = parse_long(trim(item));
            if (!v) {
                errors.push_back("line " + std::to_string(e->line) + ": [run] n_list entry '" +
                                 item + "' is not an integer");
                continue;
            }
            cfg.n_list.push_back(*v);
        }
        if (cfg.n_list.empty())
            errors.push_back("line " + std::to_string(e->line) + ": [run] n_list is empty");
    }

    for (const auto& [family, preset_field, params_field] :
         {std::tuple<std::string, std::string*, ParamMap*>{"process", &cfg.process_preset,
                                                           &cfg.process_params},
          {"multiplier", &cfg.multiplier_preset, &cfg.multiplier_params},
          {"drift", &cfg.drift_preset, &cfg.drift_params}}) {
        const auto it = sections.find(family);
        if (it == sections.end()) continue;
        for (const auto& e : it->second) {
            if (e.key == "preset") {
                *preset_field = e.value;
                if (!preset_exists(family, e.value))
                    errors.push_back("line " + std::to_string(e.line) + ": unknown " + family +
                                     " preset '" + e.value + "'");
                continue;
            }
            const auto v = parse_double(e.value);
            if (!v) {
                errors.push_back("line " + std::to_string(e.line) + ": [" + family + "] " +
                                 e.key + " = '" + e.value + "' is not a number");
                continue;
            }
            (*params_field)[e.key] = *v;
        }
    }

    // semantic validation; collect everything rather than stopping early
    if (!(cfg.T > 0.0)) errors.push_back("[grid] T must be positive");
    if (cfg.N < 2) errors.push_back("[grid] N must be at least 2");
    if (cfg.m < 1) errors.push_back("[noise] m must be at least 1");
    if (cfg.replicates < 1) errors.push_back("[run] replicates must be at least 1");
    if (!(cfg.norms.alpha > 0.0 && cfg.norms.alpha < 1.0))
        errors.push_back("[norms] alpha must lie in (0, 1)");
    if (!(cfg.norms.p >= 1.0)) errors.push_back("[norms] p must be >= 1");
    if (!(cfg.norms.beta >= 0.0 && cfg.norms.beta < 0.5))
        errors.push_back("[norms] beta must lie in [0, 1/2)");
    if (cfg.kind == ExperimentKind::converge &&
        !(cfg.norms.alpha < cfg.norms.beta && cfg.norms.beta < 0.5))
        errors.push_back(
            "[norms] convergence runs require the ordering 0 < alpha < beta < 1/2");
    if (cfg.kind != ExperimentKind::norms && cfg.kind != ExperimentKind::spde) {
        for (long n : cfg.n_list) {
            try {
                aligned_lag(make_grid(cfg.T, std::max<long>(cfg.N, 2), 0), n);
            } catch (const std::exception& ex) {
                errors.push_back("[run] n_list entry " + std::to_string(n) +
                                 " is misaligned: " + ex.what());
            }
        }
    }
    return result;
}

ExperimentConfig parse_config(const std::string& text) {
    ConfigParseResult r = parse_config_text(text);
    if (!r.ok()) {
        std::string joined = "config rejected:";
        for (const auto& e : r.errors) joined += "\n  " + e;
        throw std::invalid_argument(joined);
    }
    return r.config;
}

ConfigParseResult parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigParseResult r;
        r.errors.push_back("cannot open config file '" + path + "'");
        return r;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "T = " << format17(cfg.T) << "\n";
    out << "N = " << cfg.N << "\n";
    out << "[noise]\n";
    out << "m = " << cfg.m << "\n";
    out << "seed = " << cfg.seed << "\n";
    auto preset_block = [&out](const char* family, const std::string& preset,
                               const ParamMap& params) {
        out << "[" << family << "]\n";
        out << "preset = " << preset << "\n";
        for (const auto& [k, v] : params) out << k << " = " << format17(v) << "\n";
    };
    preset_block("process", cfg.process_preset, cfg.process_params);
    preset_block("multiplier", cfg.multiplier_preset, cfg.multiplier_params);
    preset_block("drift", cfg.drift_preset, cfg.drift_params);
    out << "[norms]\n";
    out << "alpha = " << format17(cfg.norms.alpha) << "\n";
    out << "p = " << format17(cfg.norms.p) << "\n";
    out << "beta = " << format17(cfg.norms.beta) << "\n";
    out << "[run]\n";
    out << "kind = " << to_string(cfg.kind) << "\n";
    out << "n_list = ";
    for (size_t i = 0; i < cfg.n_list.size(); ++i)
        out << (i ? "," : "") << cfg.n_list[i];
    out << "\n";
    out << "replicates = " << cfg.replicates << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    return out.str();
}

} // namespace fwdint
