#pragma once

#include <string>
#include <vector>

#include "plrf/problem.hpp"

namespace plrf {

// CSV schema: header `source,d,seed,iter,flops,risk`, one row per checkpoint,
// risk with 17 significant digits. Lines starting with '#' are metadata
// (manifest hash, diverged flag) and are skipped by the reader.
std::string curve_to_csv(const LossCurve& curve, const std::string& manifest_hash = "");
void write_curve_csv(const std::string& path, const LossCurve& curve,
                     const std::string& manifest_hash = "");

// Reads one file; rows are grouped into curves by (source, d, seed).
std::vector<LossCurve> read_curves_csv(const std::string& path);

// Expands a path or glob pattern (\*, ? in the filename part) and reads all.
std::vector<LossCurve> read_curves_glob(const std::string& pattern);

}  // namespace plrf
