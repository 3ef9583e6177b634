// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Power-of-two clocks, cubes and 2-adic coloring.
//
// A clock is a list of strictly decreasing power-of-two graduations. Each
// graduation carries a coefficient in [0, rate), so a uniform k-clock with
// rate r (graduation g_i = r * g_{i+1}) enumerates the r^k multiples of its
// smallest graduation below its span. With rate 2 the points are exactly the
// subset sums of the graduations.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clocksched {

bool is_power_of_two(std::int64_t v);
// log2 of a power of two; throws otherwise.
int exact_log2(std::int64_t v);
std::int64_t next_power_of_two(std::int64_t v);

struct Clock {
  std::vector<std::int64_t> graduations;
  std::int64_t rate = 2;

  int dimension() const { return static_cast<int>(graduations.size()); }
  std::int64_t span() const {
    return graduations.empty() ? 1 : graduations.front() * rate;
  }
  bool uniform() const;
  std::string text() const; // "[4,2,1]" plus "/r" when rate != 2

  bool operator==(const Clock &) const = default;
};

// k-clock with the given rate; the smallest graduation is `scale`.
Clock make_clock(int k, std::int64_t rate, std::int64_t scale = 1);

// Explicit graduation list; each must divide its predecessor.
Clock clock_from_graduations(std::vector<std::int64_t> graduations,
                             std::int64_t rate = 2);

// Coefficient tuples in lexicographic order, outermost graduation first.
std::vector<std::vector<std::int64_t>> clock_tuples(const Clock &clock);
// Time values of clock_tuples, in the same order.
std::vector<std::int64_t> clock_points(const Clock &clock);

struct Cube {
  int dimension = 1;
  std::int64_t side = 2;

  std::int64_t point_count() const;
};

Clock cube_to_clock(const Cube &cube);
// Cube coordinates of a clock time value (base-side digits, outermost first).
std::vector<std::int64_t> decode_cube_point(const Cube &cube, std::int64_t t);

// Splits `clock` into an outer clock enumerating unit origins and the unit
// itself (outer first). Returns {unit} when the spans agree.
std::vector<Clock> factorize(const Clock &clock, const Clock &unit);

// Repeated factorization: unit, then quotient levels of the unit's shape,
// until the remaining quotient is no larger than the unit (outer first).
std::vector<Clock> factor_hierarchy(const Clock &clock, const Clock &unit);

// All sums of one point from each factor, outer factor varying slowest.
std::vector<std::int64_t> compose_points(const std::vector<Clock> &factors);

// Exponent of the smallest power of two in value, clamped to k; the origin
// gets its own color k.
int color_of(std::int64_t value, int k);

} // namespace clocksched
