#pragma once

#include <string>
#include <vector>

#include "fwdint/experiments.hpp"

namespace fwdint {

/// Outcome of parsing a sectioned key=value config. `errors` collects every
/// parse and validation problem at once; the config is meaningful only when
/// ok().
struct ConfigParseResult {
    ExperimentConfig config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

/// Parse and validate. Unknown sections and keys are rejected with their
/// line number; numbers are parsed locale-independently.
ConfigParseResult parse_config_text(const std::string& text);

/// Convenience wrapper: throws std::invalid_argument with all messages.
ExperimentConfig parse_config(const std::string& text);

/// Canonical rendering; parse_config(render_config(c)) reproduces c.
std::string render_config(const ExperimentConfig& cfg);

/// Loads a file and parses it.
ConfigParseResult parse_config_file(const std::string& path);

} // namespace fwdint
