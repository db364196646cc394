#include "plrf/csv.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <sstream>

#include "plrf/errors.hpp"

namespace fs = std::filesystem;

namespace plrf {

std::string curve_to_csv(const LossCurve& curve, const std::string& manifest_hash) {
  std::string out;
  char line[192];
  if (!manifest_hash.empty()) {
    std::snprintf(line, sizeof(line), "# manifest=%s\n", manifest_hash.c_str());
    out += line;
  }
  if (curve.diverged) out += "# diverged=1\n";
  out += "source,d,seed,iter,flops,risk\n";
  for (const CurvePoint& p : curve.points) {
    std::snprintf(line, sizeof(line), "%s,%" PRId64 ",%" PRIu64 ",%" PRId64 ",%.17g,%.17g\n",
                  curve.source.c_str(), curve.d, curve.seed, p.iter, p.flops, p.risk);
    out += line;
  }
  return out;
}

void write_curve_csv(const std::string& path, const LossCurve& curve,
                     const std::string& manifest_hash) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw config_error("cannot open for writing: " + path);
  f << curve_to_csv(curve, manifest_hash);
  if (!f) throw config_error("write failed: " + path);
}

std::vector<LossCurve> read_curves_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open: " + path);
  std::vector<LossCurve> curves;
  bool diverged_flag = false;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("diverged=1") != std::string::npos) diverged_flag = true;
      continue;
    }
    if (line.rfind("source,", 0) == 0) continue;  // header
    std::istringstream row(line);
    std::string source, field;
    std::getline(row, source, ',');
    LossCurve probe;
    probe.source = source;
    std::getline(row, field, ',');
    probe.d = std::stoll(field);
    std::getline(row, field, ',');
    probe.seed = std::stoull(field);
    CurvePoint p{};
    std::getline(row, field, ',');
    p.iter = std::stoll(field);
    std::getline(row, field, ',');
    p.flops = std::stod(field);
    std::getline(row, field, ',');
    p.risk = std::stod(field);
    if (curves.empty() || curves.back().source != probe.source || curves.back().d != probe.d ||
        curves.back().seed != probe.seed) {
      curves.push_back(probe);
      curves.back().diverged = diverged_flag;
    }
    curves.back().points.push_back(p);
  }
  return curves;
}

std::vector<LossCurve> read_curves_glob(const std::string& pattern) {
  std::vector<LossCurve> all;
  const fs::path pat(pattern);
  const bool has_glob = pattern.find_first_of("*?[") != std::string::npos;
  if (!has_glob) {
    return read_curves_csv(pattern);
  }
  const fs::path dir = pat.parent_path().empty() ? fs::path(".") : pat.parent_path();
  const std::string name_pat = pat.filename().string();
  if (!fs::exists(dir)) throw config_error("no such directory: " + dir.string());
  std::vector<fs::path> matches;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (fnmatch(name_pat.c_str(), entry.path().filename().string().c_str(), 0) == 0) {
      matches.push_back(entry.path());
    }
  }
  std::sort(matches.begin(), matches.end());
  for (const auto& p : matches) {
    auto curves = read_curves_csv(p.string());
    all.insert(all.end(), curves.begin(), curves.end());
  }
  if (all.empty()) throw config_error("no curves matched: " + pattern);
  return all;
}

}  // namespace plrf
