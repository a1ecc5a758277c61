#pragma once

#include <string>

#include "fwdint/experiments.hpp"

namespace fwdint {

/// Persist a run: run.json (full report), errors.csv
/// (replicate,n,error_norm,v_norm,flags), summary.csv
/// (n,median,mean,q10,q90,count) and plot.dat (n median, whitespace
/// separated). Floats carry 17 significant digits; each file is written to
/// a temporary name and renamed, so a crash never leaves a partial file.
/// Re-emitting the same report produces byte-identical files.
void emit_report(const RunReport& report, const std::string& out_dir);

} // namespace fwdint
