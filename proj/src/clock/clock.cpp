// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/clock.hpp>
#include <clocksched/error.hpp>

#include <bit>

namespace clocksched {

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

int exact_log2(std::int64_t v) {
  if (!is_power_of_two(v))
    throw Error(std::to_string(v) + " is not a power of two");
  return std::countr_zero(static_cast<std::uint64_t>(v));
}

std::int64_t next_power_of_two(std::int64_t v) {
  if (v <= 1)
    return 1;
  return static_cast<std::int64_t>(
      std::bit_ceil(static_cast<std::uint64_t>(v)));
}

bool Clock::uniform() const {
  for (std::size_t i = 1; i < graduations.size(); ++i)
    if (graduations[i - 1] != graduations[i] * rate)
      return false;
  return true;
}

std::string Clock::text() const {
  std::string s = "[";
  for (std::size_t i = 0; i < graduations.size(); ++i)
    s += (i ? "," : "") + std::to_string(graduations[i]);
  s += "]";
  if (rate != 2)
    s += "/" + std::to_string(rate);
  return s;
}

Clock make_clock(int k, std::int64_t rate, std::int64_t scale) {
  if (k < 1)
    throw Error("clock dimension must be at least 1");
  if (!is_power_of_two(rate) || rate < 2)
    throw Error("clock rate " + std::to_string(rate) +
                " is not a power of two >= 2");
  if (!is_power_of_two(scale))
    throw Error("clock scale " + std::to_string(scale) +
                " is not a power of two");
  Clock c;
  c.rate = rate;
  c.graduations.assign(static_cast<std::size_t>(k), 0);
  std::int64_t g = scale;
  for (int i = k - 1; i >= 0; --i) {
    c.graduations[static_cast<std::size_t>(i)] = g;
    g *= rate;
  }
  return c;
}

Clock clock_from_graduations(std::vector<std::int64_t> graduations,
                             std::int64_t rate) {
  if (graduations.empty())
    throw Error("clock needs at least one graduation");
  if (!is_power_of_two(rate) || rate < 2)
    throw Error("clock rate " + std::to_string(rate) +
                " is not a power of two >= 2");
  for (std::size_t i = 0; i < graduations.size(); ++i) {
    if (!is_power_of_two(graduations[i]))
      throw Error("graduation " + std::to_string(graduations[i]) +
                  " is not a power of two");
    if (i && graduations[i] >= graduations[i - 1])
      throw Error("graduations must be strictly decreasing");
  }
  // A coefficient range wider than the gap to the previous graduation would
  // enumerate the same time value twice.
  for (std::size_t i = 1; i < graduations.size(); ++i)
    if (graduations[i] * rate > graduations[i - 1])
      throw Error("rate " + std::to_string(rate) + " overlaps graduations " +
                  std::to_string(graduations[i - 1]) + " and " +
                  std::to_string(graduations[i]));
  return Clock{std::move(graduations), rate};
}

std::vector<std::vector<std::int64_t>> clock_tuples(const Clock &clock) {
  std::vector<std::vector<std::int64_t>> out;
  const std::size_t k = clock.graduations.size();
  std::vector<std::int64_t> digits(k, 0);
  for (;;) {
    std::vector<std::int64_t> tuple(k);
    for (std::size_t i = 0; i < k; ++i)
      tuple[i] = digits[i] * clock.graduations[i];
    out.push_back(std::move(tuple));
    std::size_t i = k;
    while (i > 0) {
      if (++digits[i - 1] < clock.rate)
        break;
      digits[i - 1] = 0;
      --i;
    }
    if (i == 0)
      return out;
  }
}

std::vector<std::int64_t> clock_points(const Clock &clock) {
  std::vector<std::int64_t> out;
  for (const auto &t : clock_tuples(clock)) {
    std::int64_t v = 0;
    for (auto x : t)
      v += x;
    out.push_back(v);
  }
  return out;
}

std::int64_t Cube::point_count() const {
  std::int64_t n = 1;
  for (int i = 0; i < dimension; ++i)
    n *= side;
  return n;
}

Clock cube_to_clock(const Cube &cube) {
  if (!is_power_of_two(cube.side) || cube.side < 2)
    throw Error("cube side " + std::to_string(cube.side) +
                " is not a power of two; pad first");
  return make_clock(cube.dimension, cube.side, 1);
}

std::vector<std::int64_t> decode_cube_point(const Cube &cube, std::int64_t t) {
  std::vector<std::int64_t> at(static_cast<std::size_t>(cube.dimension), 0);
  for (std::size_t i = at.size(); i-- > 0;) {
    at[i] = t % cube.side;
    t /= cube.side;
  }
  return at;
}

namespace {

// k with base^k == q, or -1.
int exact_log(std::int64_t q, std::int64_t base) {
  int k = 0;
  while (q > 1) {
    if (q % base)
      return -1;
    q /= base;
    ++k;
  }
  return k;
}

Clock quotient_clock(std::int64_t quotient, std::int64_t rate,
                     std::int64_t scale) {
  int k = exact_log(quotient, rate);
  if (k < 1) {
    rate = 2;
    k = exact_log2(quotient);
  }
  return make_clock(k, rate, scale);
}

} // namespace

std::vector<Clock> factorize(const Clock &clock, const Clock &unit) {
  const std::int64_t s = clock.span(), u = unit.span();
  if (u <= 0 || s % u != 0 || !is_power_of_two(s / u))
    throw Error("unit span " + std::to_string(u) + " does not divide span " +
                std::to_string(s));
  if (s == u)
    return {unit};
  return {quotient_clock(s / u, clock.rate, u), unit};
}

std::vector<Clock> factor_hierarchy(const Clock &clock, const Clock &unit) {
  const std::int64_t s = clock.span(), u = unit.span();
  if (u <= 1 || s % u != 0 || !is_power_of_two(s / u))
    throw Error("unit span " + std::to_string(u) + " does not divide span " +
                std::to_string(s));
  std::vector<Clock> inner{unit};
  std::int64_t scale = u, quotient = s / u;
  while (quotient > u) {
    Clock level = unit;
    for (auto &g : level.graduations)
      g *= scale;
    inner.push_back(level);
    scale *= u;
    quotient /= u;
  }
  if (quotient > 1)
    inner.push_back(quotient_clock(quotient, unit.rate, scale));
  return {inner.rbegin(), inner.rend()};
}

std::vector<std::int64_t> compose_points(const std::vector<Clock> &factors) {
  std::vector<std::int64_t> acc{0};
  for (const Clock &f : factors) {
    const auto pts = clock_points(f);
    std::vector<std::int64_t> next;
    next.reserve(acc.size() * pts.size());
    for (auto a : acc)
      for (auto p : pts)
        next.push_back(a + p);
    acc = std::move(next);
  }
  return acc;
}

int color_of(std::int64_t value, int k) {
  if (value < 0)
    throw Error("color of a negative value");
  if (value == 0)
    return k;
  const int v = std::countr_zero(static_cast<std::uint64_t>(value));
  return v < k ? v : k;
}

} // namespace clocksched
