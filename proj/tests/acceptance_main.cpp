// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria. `--only N` runs a single criterion.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;  // fills a metrics string
};

std::vector<Criterion>& registry() {
  static std::vector<Criterion> r;
  return r;
}

}  // namespace acceptance

#define ACCEPTANCE_CRITERION(ID, TITLE)                                          \
  static bool run_criterion_##ID(std::string& metrics);                         \
  static const bool registered_##ID = [] {                                      \
    acceptance::registry().push_back({ID, TITLE, run_criterion_##ID});          \
    return true;                                                                \
  }();                                                                          \
  static bool run_criterion_##ID(std::string& metrics)

#include "acceptance_criteria.inc"

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc - 1; ++i) {
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
  }
  auto& all = acceptance::registry();
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& crit : all) {
    if (only != 0 && crit.id != only) continue;
    std::string metrics;
    bool ok = false;
    try {
      ok = crit.run(metrics);
    } catch (const std::exception& e) {
      metrics = std::string("exception: ") + e.what();
    }
    std::printf("[%s] C%d %s: %s\n", ok ? "PASS" : "FAIL", crit.id, crit.title,
                metrics.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
