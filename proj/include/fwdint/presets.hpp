#pragma once

#include <map>
#include <string>
#include <vector>

#include "fwdint/brownian.hpp"
#include "fwdint/calculus.hpp"
#include "fwdint/process.hpp"
#include "fwdint/spde.hpp"

namespace fwdint {

using ParamMap = std::map<std::string, double>;

struct PresetInfo {
    std::string name;
    std::string family;  // process | multiplier | drift
    std::string summary;
    std::vector<std::string> params;
};

/// Catalog of the named presets selectable from config files.
const std::vector<PresetInfo>& preset_catalog();

/// Integrand presets: constant, linear, brownian_adapted, brownian_terminal,
/// power_singular(eps), matrix_smooth(d), matrix_adapted(d).
ProcessSpec make_process_preset(const std::string& name, const ParamMap& params, long m);

/// Multiplier presets: constant, terminal_functional(phi), singular_power(delta),
/// evolution_family (built from a drift along a fixed path).
MultiplierSpec make_multiplier_preset(const std::string& name, const ParamMap& params,
                                      const TimeGrid& grid, const BrownianBundle* w = nullptr,
                                      const DriftSpec* drift = nullptr);

/// Drift presets: zero, scalar(a), diagonal(a0..), stiff(lambda), random_adapted(a).
DriftSpec make_drift_preset(const std::string& name, const ParamMap& params);

} // namespace fwdint
