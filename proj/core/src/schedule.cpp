#include "plrf/schedule.hpp"

#include <cmath>

#include "plrf/errors.hpp"

namespace plrf {

CheckpointSchedule CheckpointSchedule::geometric_default(int64_t horizon, double ratio) {
  CheckpointSchedule s;
  s.kind = Kind::geometric;
  s.first = 1;
  s.ratio = ratio;
  s.max_iter = horizon;
  return s;
}

CheckpointSchedule CheckpointSchedule::linear(int64_t first, int64_t step, int64_t horizon) {
  CheckpointSchedule s;
  s.kind = Kind::linear;
  s.first = first;
  s.step = step;
  s.max_iter = horizon;
  return s;
}

std::vector<int64_t> CheckpointSchedule::iterations() const {
  if (first < 1) throw config_error("schedule: first checkpoint must be >= 1");
  if (max_iter < 1) throw config_error("schedule: max must be >= 1");
  std::vector<int64_t> out;
  if (kind == Kind::geometric) {
    if (!(ratio > 1.0)) throw config_error("schedule: geometric ratio must exceed 1");
    double next = static_cast<double>(first);
    int64_t r = first;
    while (r <= max_iter) {
      out.push_back(r);
      next *= ratio;
      const int64_t candidate = static_cast<int64_t>(std::floor(next));
      r = candidate > r ? candidate : r + 1;
    }
  } else {
    if (step < 1) throw config_error("schedule: linear step must be >= 1");
    for (int64_t r = first; r <= max_iter; r += step) out.push_back(r);
  }
  return out;
}

}  // namespace plrf
