// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/builder.hpp>
#include <clocksched/verifier.hpp>

#include <doctest.h>

#include "oracles.hpp"

using namespace clocksched;
using V = std::vector<std::int64_t>;

namespace {

const char *kMatmul = "space I[2],J[2],K[2]; a(I,J) += b(I,K)*c(K,J);";
const char *kTranspose = "space I[2],J[2]; a(I,J) = a(J,I);";
const char *kStencil = "space I[4],J[4]; a(I,J) += a(I,J+1)+a(I+1,J)+a(I+1,J+1);";

ScheduleTree convolved_matmul(const ComputationSpec &spec) {
  BuildOptions o;
  o.mapping = parse_mapping("K=8,I=4,J=2");
  o.convolutions = 2;
  return build_schedule(spec, o);
}

oracle::Grid read_grid(const ArrayStore &s, const std::string &a, std::int64_t n,
                       std::int64_t m) {
  oracle::Grid g(static_cast<std::size_t>(n), V(static_cast<std::size_t>(m)));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < m; ++j)
      g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<std::int64_t>(s.get(a, {i, j}));
  return g;
}

} // namespace

TEST_CASE("coverage: sequential 2x2 and a deleted record") {
  const auto spec = parse_spec("space I[2],J[2]; a(I,J) = b(I,J);");
  auto tr = enumerate(sequential_schedule(spec));
  const auto ok = check_coverage(tr, spec);
  CHECK(ok.pass());
  CHECK(ok.expected == 4);
  CHECK(ok.visited == 4);
  tr.records.erase(tr.records.begin() + 2);
  const auto bad = check_coverage(tr, spec);
  CHECK_FALSE(bad.pass());
  REQUIRE(bad.missing.size() == 1);
  CHECK(bad.missing[0] == V{1, 0});
  tr.records.push_back(tr.records.front());
  tr.records.push_back(tr.records.front());
  tr.records.back().lattice_point = {2, 0};
  const auto worse = check_coverage(tr, spec);
  CHECK(worse.duplicated.size() == 1);
  CHECK(worse.outside.size() == 1);
}

TEST_CASE("coverage: convolved matmul against the Cartesian product") {
  const auto spec = parse_spec(kMatmul);
  const auto tr = enumerate(convolved_matmul(spec));
  REQUIRE(tr.records.size() == 8);
  std::set<Point> got;
  for (const auto &r : tr.records)
    got.insert(r.lattice_point);
  const auto all = oracle::cartesian({2, 2, 2});
  CHECK(got == std::set<Point>(all.begin(), all.end()));
  CHECK(check_coverage(tr, spec).pass());
}

TEST_CASE("dependencies: transpose with and without temps") {
  const auto spec = parse_spec(kTranspose);
  BuildOptions o;
  o.temp_budget = 2;
  const auto t = build_schedule(spec, o);
  const auto rep = check_dependencies(enumerate(t), spec, t.temp_plan);
  CHECK(rep.pass());
  CHECK(rep.cells_used <= 2);

  // Without a plan, the visit of (1,0) assigns a(1,0) from a(0,1) and the
  // later visit of (0,1) reads the clobbered a(1,0).
  auto bare = sequential_schedule(spec);
  const auto tr = enumerate(bare);
  REQUIRE(tr.records[1].lattice_point == V{1, 0});
  REQUIRE(tr.records[2].lattice_point == V{0, 1});
  const auto fail = check_dependencies(tr, spec, TempPlan{});
  REQUIRE_FALSE(fail.pass());
  CHECK(fail.violations.front().location == "a(1,0)");
  CHECK(fail.violations.front().seq == 2);
}

TEST_CASE("dependencies: matmul with any K order commutes") {
  const auto spec = parse_spec(kMatmul);
  const auto kmajor = sequential_schedule(spec, {"K", "I", "J"});
  CHECK(check_dependencies(enumerate(kmajor), spec, kmajor.temp_plan).pass());
  const auto lex = sequential_schedule(spec);
  auto tr = enumerate(lex);
  CHECK_FALSE(check_dependencies(tr, spec, lex.temp_plan).commutes);
  // K innermost: swap each (K=0,K=1) pair so every a(I,J) sums backwards.
  for (std::size_t i = 0; i + 1 < tr.records.size(); i += 2)
    std::swap(tr.records[i].lattice_point, tr.records[i + 1].lattice_point);
  REQUIRE(tr.records[0].lattice_point == V{0, 0, 1});
  const auto rep = check_dependencies(tr, spec, lex.temp_plan);
  CHECK(rep.pass());
  CHECK(rep.commutes);
  CHECK(rep.text().find("commutes") != std::string::npos);
}

TEST_CASE("interpret: matmul under the convolved schedule") {
  const auto spec = parse_spec(kMatmul);
  const AccessModel access(spec);
  ArrayStore in(access);
  in.fill("b", {1, 2, 3, 4});
  in.fill("c", {5, 6, 7, 8});
  const auto t = convolved_matmul(spec);
  const auto out = interpret(spec, enumerate(t), t.temp_plan, in);
  const auto expect = oracle::matmul({{1, 2}, {3, 4}}, {{5, 6}, {7, 8}});
  CHECK(read_grid(out, "a", 2, 2) == expect);
  CHECK(expect == oracle::Grid{{19, 22}, {43, 50}});
}

TEST_CASE("interpret: transpose under the unfolded schedule") {
  const auto spec = parse_spec(kTranspose);
  const AccessModel access(spec);
  ArrayStore in(access);
  in.fill("a", {1, 2, 3, 4});
  BuildOptions o;
  o.temp_budget = 2;
  const auto t = build_schedule(spec, o);
  REQUIRE(t.copies() == 2);
  for (auto order : {Interleaving::Sequential, Interleaving::ReverseCopies,
                     Interleaving::RoundRobin}) {
    const auto out = interpret(spec, enumerate(t), t.temp_plan, in, order);
    CHECK(read_grid(out, "a", 2, 2) == oracle::transpose({{1, 2}, {3, 4}}));
  }
}

TEST_CASE("interpret: stencil all ones under the clock schedule") {
  const auto spec = parse_spec(kStencil);
  const AccessModel access(spec);
  ArrayStore in(access);
  in.fill("a", V(16, 1));
  BuildOptions o;
  o.mapping = parse_mapping("S=16,I=8,T=4,J=2");
  o.convolutions = 3;
  const auto t = build_schedule(spec, o);
  const auto out = interpret(spec, enumerate(t), t.temp_plan, in);
  const auto expect = oracle::stencil_sweep(oracle::Grid(4, V(4, 1)));
  CHECK(read_grid(out, "a", 4, 4) == expect);
  CHECK(read_grid(reference_interpret(spec, in), "a", 4, 4) == expect);
}

TEST_CASE("interpret: out-of-space points are rejected") {
  const auto spec = parse_spec("space I[2]; a(I) = b(I);");
  auto tr = enumerate(sequential_schedule(spec));
  tr.records[1].lattice_point = {5};
  CHECK_THROWS_AS(interpret(spec, tr, TempPlan{}, ArrayStore(AccessModel(spec))), Error);
}

TEST_CASE("reference_interpret snapshots self reads") {
  // a(I) += a(I+1) in increasing I reads untouched values; the reference
  // must also give the snapshot value when the order would expose a newer one.
  const auto spec = parse_spec("space I[4]; a(I) += a(I+1);");
  const AccessModel access(spec);
  ArrayStore in(access);
  in.fill("a", {1, 2, 3, 4});
  const auto out = reference_interpret(spec, in);
  CHECK(out.values() == std::vector<Value>{3, 5, 7, 4});
  const auto t = sequential_schedule(spec);
  CHECK(interpret(spec, enumerate(t), t.temp_plan, in) == out);
}

TEST_CASE("equivalent: matmul, reversed transpose, reflexivity") {
  const auto mm = parse_spec(kMatmul);
  const auto r = equivalent(mm, sequential_schedule(mm), convolved_matmul(mm), 10);
  CHECK(r.pass());
  CHECK(r.trials == 10);
  CHECK(r.seed == kDefaultSeed);

  const auto tp = parse_spec(kTranspose);
  auto reversed = sequential_schedule(tp, {"J", "I"});
  reversed.temp_plan = TempPlan{};
  const auto bad = equivalent(tp, sequential_schedule(tp), reversed, 10);
  CHECK_FALSE(bad.pass());
  CHECK(bad.counterexample.find(" vs ") != std::string::npos);

  const auto st = parse_spec(kStencil);
  const auto seq = sequential_schedule(st);
  CHECK(equivalent(st, seq, seq, 3).pass());
}

TEST_CASE("values do not overflow") {
  // c is multiplied by 9 at each of 40 points: 9^41 needs far more than 64
  // bits. The chain goes through a second array because a self read sees
  // the value from before the formula first touched it.
  const auto spec = parse_spec("space I[40]; a = c*b(I); c = a;");
  const AccessModel access(spec);
  ArrayStore in(access);
  in.fill("c", {9});
  in.fill("b", V(40, 9));
  const auto out = reference_interpret(spec, in);
  Value expect = 1;
  for (int i = 0; i < 41; ++i)
    expect *= 9;
  CHECK(out.get("c", {}) == expect);
  const auto t = sequential_schedule(spec);
  CHECK(interpret(spec, enumerate(t), t.temp_plan, in) == out);
}

TEST_CASE("random stores are seeded") {
  const AccessModel access(parse_spec(kMatmul));
  const auto a = random_store(access, 7), b = random_store(access, 7),
             c = random_store(access, 8);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  for (auto v : a.values()) {
    CHECK(v >= -9);
    CHECK(v <= 9);
  }
  CHECK(a.diff(b).empty());
  CHECK_FALSE(a.diff(c).empty());
}

TEST_CASE("analyze: lexicographic trace") {
  const auto spec = parse_spec("space I[4],J[4]; a(I,J) = b(I,J);");
  const auto p = analyze(enumerate(sequential_schedule(spec)));
  for (auto w : p.widths)
    CHECK(w == 1);
  CHECK(p.locality == 15);
  CHECK(p.total == 16);
}

TEST_CASE("analyze: convolved 3-clock widths") {
  const auto tr = enumerate(apply_convolutions(clock_skeleton(make_clock(3, 2)), 2));
  const auto p = analyze(tr);
  // Oracle: class sizes per (T) and (T,TXN) computed directly.
  std::map<V, std::int64_t> by_t, by_t_txn;
  for (const auto &r : tr.records) {
    ++by_t[{r.time_point[0]}];
    ++by_t_txn[{r.time_point[0], r.time_point[1]}];
  }
  std::int64_t w1 = 0, w2 = 0;
  for (auto &[k, n] : by_t_txn)
    w1 = std::max(w1, n);
  for (auto &[k, n] : by_t)
    w2 = std::max(w2, n);
  CHECK(p.widths == V{1, w1, w2});
  CHECK(p.widths == V{1, 2, 4});
}

TEST_CASE("analyze: color measure of a 16-point unit") {
  const auto p = analyze(enumerate(clock_skeleton(make_clock(4, 2))));
  std::map<int, std::int64_t> expect;
  for (std::int64_t v = 0; v < 16; ++v)
    ++expect[v == 0 ? 4 : std::min(oracle::valuation(v), 4)];
  CHECK(p.colors == expect);
  CHECK(p.measure.at(0) == Rational{1, 2});
  CHECK(p.measure.at(1) == Rational{1, 4});
  CHECK(p.measure.at(2) == Rational{1, 8});
  CHECK(p.measure.at(3) == Rational{1, 16});
  CHECK(p.measure.at(4) == Rational{1, 16});
  Rational sum{0, 1};
  for (const auto &[c, m] : p.measure)
    sum = sum + m;
  CHECK(sum == Rational{1, 1});
}

TEST_CASE("parallel groups define disjoint locations") {
  const auto mm = parse_spec(kMatmul);
  CHECK(check_parallel_defs(enumerate(convolved_matmul(mm)), mm).empty());
  const auto sum = parse_spec("space I[2],J[2]; s += a(I,J);");
  const auto t = apply_convolutions(sequential_schedule(sum), 1);
  CHECK_FALSE(check_parallel_defs(enumerate(t), sum).empty());
}

TEST_CASE("locality does not grow with parallel width on the 6-clock family") {
  const Clock six = make_clock(6, 2);
  std::vector<ScheduleTree> family{
      clock_skeleton(six),
      product_skeleton(factorize(six, make_clock(3, 2)), false),
      product_skeleton(factorize(six, make_clock(3, 2)), true),
      product_skeleton(factor_hierarchy(six, make_clock(2, 2)), true),
      product_skeleton(factorize(six, make_clock(3, 4)), true),
      apply_convolutions(clock_skeleton(six), 5)};
  std::vector<std::pair<std::int64_t, std::int64_t>> points; // max width, locality
  for (const auto &t : family) {
    const auto tr = enumerate(t);
    REQUIRE(tr.records.size() == 64);
    const auto p = analyze(tr);
    points.emplace_back(*std::max_element(p.widths.begin(), p.widths.end()), p.locality);
  }
  CHECK(points.front() == std::pair<std::int64_t, std::int64_t>{1, 63});
  CHECK(points.back() == std::pair<std::int64_t, std::int64_t>{32, 1});
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i) {
    CAPTURE(i);
    if (points[i].first > points[i - 1].first)
      CHECK(points[i].second <= points[i - 1].second);
  }
}
