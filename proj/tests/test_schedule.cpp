#include <doctest.h>

#include "plrf/errors.hpp"
#include "plrf/schedule.hpp"

using namespace plrf;

TEST_CASE("geometric schedule is strictly increasing and capped") {
  const CheckpointSchedule s = CheckpointSchedule::geometric_default(1000, 1.1);
  const auto iters = s.iterations();
  REQUIRE(!iters.empty());
  CHECK(iters.front() == 1);
  for (size_t i = 1; i < iters.size(); ++i) CHECK(iters[i] > iters[i - 1]);
  CHECK(iters.back() <= 1000);
}

TEST_CASE("linear schedule") {
  const CheckpointSchedule s = CheckpointSchedule::linear(5, 10, 40);
  CHECK(s.iterations() == std::vector<int64_t>{5, 15, 25, 35});
}

TEST_CASE("schedule validation") {
  CheckpointSchedule s;
  s.ratio = 0.9;
  s.max_iter = 10;
  CHECK_THROWS_AS(s.iterations(), config_error);
}
