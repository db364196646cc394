#pragma once

#include <cstdint>
#include <vector>

namespace plrf {

// Checkpoint cadence for loss curves. Iteration 0 is always recorded by the
// runners and is not part of the generated list.
struct CheckpointSchedule {
  enum class Kind { geometric, linear };
  Kind kind = Kind::geometric;
  int64_t first = 1;
  double ratio = 1.1;  // geometric, > 1
  int64_t step = 1;    // linear, >= 1
  int64_t max_iter = 1;

  static CheckpointSchedule geometric_default(int64_t horizon, double ratio = 1.1);
  static CheckpointSchedule linear(int64_t first, int64_t step, int64_t horizon);

  // Strictly increasing, last element <= max_iter. Throws config_error on
  // invalid parameters.
  std::vector<int64_t> iterations() const;
};

}  // namespace plrf
