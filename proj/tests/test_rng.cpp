#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hetsel/rng.hpp"

using hetsel::RngStream;

TEST_CASE("identical (seed, stream) reproduces the identical sequence") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams decorrelate") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("substream does not disturb the parent") {
  RngStream a(1, 2);
  RngStream b(1, 2);
  (void)a.substream(9);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("unit draws stay in [0,1) and look uniform") {
  RngStream rng(3, 0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gaussian moments") {
  RngStream rng(4, 0);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("next_below covers the range uniformly enough") {
  RngStream rng(5, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) counts[rng.next_below(7)] += 1;
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("sample_without_replacement returns distinct pool members") {
  RngStream rng(6, 0);
  const std::vector<int> pool{3, 5, 8, 9, 12, 20};
  const std::vector<int> got = rng.sample_without_replacement(pool, 4);
  CHECK(got.size() == 4);
  std::set<int> uniq(got.begin(), got.end());
  CHECK(uniq.size() == 4);
  for (int v : got) CHECK(std::count(pool.begin(), pool.end(), v) == 1);
}
