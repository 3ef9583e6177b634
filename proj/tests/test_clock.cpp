// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/clock.hpp>
#include <clocksched/error.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <map>
#include <set>

using namespace clocksched;
using V = std::vector<std::int64_t>;

TEST_CASE("make_clock") {
  const Clock c3 = make_clock(3, 2);
  CHECK(c3.graduations == V{4, 2, 1});
  CHECK(c3.span() == 8);
  const Clock c1 = make_clock(1, 2);
  CHECK(c1.graduations == V{1});
  CHECK(c1.span() == 2);
  // Smallest graduation 1 by default: rate 4 gives 16,4,1 over 64 points.
  const Clock c4 = make_clock(3, 4);
  CHECK(c4.graduations == V{16, 4, 1});
  CHECK(c4.span() == 64);
  CHECK(make_clock(3, 4, 2).graduations == V{32, 8, 2});
  CHECK_THROWS_AS(make_clock(3, 3), Error);
  CHECK_THROWS_AS(make_clock(0, 2), Error);
}

TEST_CASE("clock_points: [4,2,1] tuples in lexicographic coefficient order") {
  const Clock c = make_clock(3, 2);
  const std::vector<V> tuples{{0, 0, 0}, {0, 0, 1}, {0, 2, 0}, {0, 2, 1},
                              {4, 0, 0}, {4, 0, 1}, {4, 2, 0}, {4, 2, 1}};
  CHECK(clock_tuples(c) == tuples);
  CHECK(clock_points(c) == V{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(clock_points(make_clock(1, 2)) == V{0, 1});
}

TEST_CASE("clock_points: subset sums of {32,8,2}") {
  const Clock c = clock_from_graduations({32, 8, 2}, 2);
  const auto pts = clock_points(c);
  CHECK(pts.size() == 8);
  CHECK(std::set<std::int64_t>(pts.begin(), pts.end()) == oracle::subset_sums({32, 8, 2}));
  CHECK(pts == V{0, 2, 8, 10, 32, 34, 40, 42});
}

TEST_CASE("clock bijection for rate-2 clocks") {
  for (int k = 1; k <= 10; ++k) {
    const auto pts = clock_points(make_clock(k, 2));
    V expect(static_cast<std::size_t>(1) << k);
    for (std::size_t i = 0; i < expect.size(); ++i)
      expect[i] = static_cast<std::int64_t>(i);
    CHECK(pts == expect);
  }
}

TEST_CASE("cube_to_clock and decoding") {
  CHECK(cube_to_clock({3, 2}).graduations == V{4, 2, 1});
  CHECK(cube_to_clock({1, 2}).graduations == V{1});
  const Clock c = cube_to_clock({2, 4});
  CHECK(c.graduations == V{4, 1});
  CHECK(c.rate == 4);
  // Duality: decoding every time value recovers each cube point once.
  std::set<V> seen;
  for (auto t : clock_points(c))
    seen.insert(decode_cube_point({2, 4}, t));
  CHECK(seen.size() == 16);
  const auto all = oracle::cartesian({4, 4});
  CHECK(seen == std::set<V>(all.begin(), all.end()));
  CHECK_THROWS_AS(cube_to_clock({2, 3}), Error);
}

TEST_CASE("factorize: 6-clock over a 3-clock unit") {
  const Clock six = make_clock(6, 2);
  const auto f = factorize(six, make_clock(3, 2));
  REQUIRE(f.size() == 2);
  CHECK(f[0].graduations == V{32, 16, 8});
  CHECK(f[1].graduations == V{4, 2, 1});
  auto composed = compose_points(f);
  std::sort(composed.begin(), composed.end());
  CHECK(composed == clock_points(six));
  CHECK(factorize(six, six) == std::vector<Clock>{six});
  CHECK_THROWS_AS(factorize(make_clock(3, 2), make_clock(4, 2)), Error);
}

TEST_CASE("factorize: rate-4 re-representation keeps the 64 points") {
  const Clock six = make_clock(6, 2);
  const Clock r4 = make_clock(3, 4);
  const auto f = factorize(six, r4);
  REQUIRE(f.size() == 1);
  auto a = clock_points(six), b = clock_points(f[0]);
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("factor_hierarchy nests unit clocks") {
  const auto h = factor_hierarchy(make_clock(6, 2), make_clock(2, 2));
  REQUIRE(h.size() == 3);
  auto pts = compose_points(h);
  std::sort(pts.begin(), pts.end());
  CHECK(pts == clock_points(make_clock(6, 2)));
}

TEST_CASE("color_of") {
  CHECK(color_of(4, 3) == 2);
  CHECK(color_of(6, 3) == 1);
  CHECK(color_of(0, 3) == 3);
  CHECK(color_of(64, 3) == 3);
  std::map<int, int> hist, expect;
  for (std::int64_t v = 1; v <= 16; ++v) {
    ++hist[color_of(v, 4)];
    ++expect[std::min(oracle::valuation(v), 4)];
  }
  CHECK(hist == expect);
  CHECK(hist == std::map<int, int>{{0, 8}, {1, 4}, {2, 2}, {3, 1}, {4, 1}});
}

TEST_CASE("color classes partition [1,2^k)") {
  for (int k = 1; k <= 8; ++k) {
    std::map<int, std::int64_t> hist;
    for (std::int64_t v = 1; v < (std::int64_t{1} << k); ++v)
      ++hist[color_of(v, k)];
    for (int c = 0; c < k; ++c)
      CHECK(hist[c] == (std::int64_t{1} << (k - 1 - c)));
  }
}
