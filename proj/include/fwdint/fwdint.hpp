#pragma once

// Convenience umbrella for the whole toolkit.

#include "fwdint/grid.hpp"
#include "fwdint/brownian.hpp"
#include "fwdint/process.hpp"
#include "fwdint/integrals.hpp"
#include "fwdint/norms.hpp"
#include "fwdint/calculus.hpp"
#include "fwdint/spde.hpp"
#include "fwdint/presets.hpp"
#include "fwdint/experiments.hpp"
#include "fwdint/config.hpp"
#include "fwdint/report_io.hpp"
