#include <doctest.h>

#include <cmath>
#include <vector>

#include "plrf/rng.hpp"

using namespace plrf;

TEST_CASE("counter rng is a pure function of (key, counter)") {
  CounterRng a = CounterRng::derive(42, {kTagMatrix});
  CounterRng b = CounterRng::derive(42, {kTagMatrix});
  for (uint64_t c : {0ULL, 1ULL, 77ULL, 1ULL << 40}) {
    CHECK(a.bits(c) == b.bits(c));
    CHECK(a.normal(c) == b.normal(c));
  }
  CHECK(a.normal(3) == a.normal(3));
  CHECK(a.normal(3) != a.normal(4));
}

TEST_CASE("derived streams differ by path") {
  CounterRng a = CounterRng::derive(42, {kTagMatrix});
  CounterRng b = CounterRng::derive(42, {kTagSgdNoise});
  CounterRng c = CounterRng::derive(43, {kTagMatrix});
  CHECK(a.key() != b.key());
  CHECK(a.key() != c.key());
}

TEST_CASE("normals have roughly unit variance and zero mean") {
  CounterRng rng = CounterRng::derive(7, {kTagMatrix});
  const int n = 200000;
  double sum = 0, sum2 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(static_cast<uint64_t>(i));
    sum += z;
    sum2 += z * z;
    sum4 += z * z * z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));  // Gaussian kurtosis
}

TEST_CASE("uniform stays inside (0, 1]") {
  CounterRng rng = CounterRng::derive(9, {kTagMatrix});
  for (uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform(i);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}
