// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/builder.hpp>
#include <clocksched/verifier.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <algorithm>
#include <set>

using namespace clocksched;
using V = std::vector<std::int64_t>;

namespace {

const char *kMatmul = "space I[2],J[2],K[2]; a(I,J) += b(I,K)*c(K,J);";
const char *kTranspose = "space I[2],J[2]; a(I,J) = a(J,I);";
const char *kStencil = "space I[4],J[4]; a(I,J) += a(I,J+1)+a(I+1,J)+a(I+1,J+1);";
const char *kSum = "space T[2],TX[2],TY[2]; S += a(T,TX,TY);";

void check_node(const EnumNode &n, const std::string &index, std::int64_t step,
                std::vector<std::string> bases, std::int64_t extent) {
  CAPTURE(index);
  CHECK(n.index == index);
  CHECK(n.step == step);
  CHECK(n.lower.bases == bases);
  CHECK(n.lower.constant == 0);
  CHECK(n.extent == extent);
}

std::multiset<Point> visited(const ScheduleTree &t) {
  std::multiset<Point> out;
  for (const auto &r : enumerate(t).records)
    out.insert(r.lattice_point);
  return out;
}

std::multiset<std::int64_t> time_values(const ScheduleTree &t) {
  std::multiset<std::int64_t> out;
  for (const auto &r : enumerate(t).records)
    out.insert(r.time_value);
  return out;
}

} // namespace

TEST_CASE("parse_mapping") {
  const auto m = parse_mapping("K=8,I=4,J=2");
  REQUIRE(m.assignments.size() == 3);
  CHECK(m.assignments[0].index == "K");
  CHECK(m.assignments[0].graduation == 8);
  const auto s = parse_mapping("T=8:4,I=2");
  CHECK(s.assignments[0].size == 4);
  CHECK_THROWS_AS(parse_mapping("K=3"), Error);
  CHECK_THROWS_AS(parse_mapping("K"), Error);
  CHECK_THROWS_AS(parse_mapping("K=8,K=4"), Error);
  CHECK_THROWS_AS(parse_mapping("T=8:0"), Error);
}

TEST_CASE("pad_and_guard") {
  const auto p3 = pad_and_guard(parse_spec("space I[3]; a(I) = b(I);"));
  CHECK(p3.spec.indexes[0].size == 4);
  REQUIRE(p3.guards.size() == 1);
  CHECK(p3.guards[0].index == "I");
  CHECK(p3.guards[0].limit == 3);
  const auto p4 = pad_and_guard(parse_spec("space I[4]; a(I) = b(I);"));
  CHECK(p4.spec.indexes[0].size == 4);
  CHECK(p4.guards.empty());
  const auto p35 = pad_and_guard(parse_spec("space I[3],J[5]; a(I,J) = b(I,J);"));
  CHECK(p35.spec.indexes[0].size == 4);
  CHECK(p35.spec.indexes[1].size == 8);
  CHECK(p35.padded_points() == 32);
  // Oracle: count points of the padded box inside the declared one.
  std::int64_t inside = 0;
  for (const auto &p : oracle::cartesian({4, 8}))
    inside += p[0] < 3 && p[1] < 5;
  CHECK(p35.guarded_points() == inside);
  CHECK(inside == 15);
}

TEST_CASE("map_indexes: f(M,N) nest in graduation order") {
  const auto spec = parse_spec("space M[2],N[2],P[2],Q[2]; f(M,N) = g(M,N)*h(P,Q);");
  const auto t = map_indexes(spec, make_clock(4, 2), parse_mapping("M=8,N=4,P=2,Q=1"));
  const auto &n = t.nests.at(0).nodes;
  REQUIRE(n.size() == 4);
  check_node(n[0], "M", 8, {}, 16);
  check_node(n[1], "N", 4, {}, 8);
  check_node(n[2], "P", 2, {}, 4);
  check_node(n[3], "Q", 1, {}, 2);
  const auto cov = check_coverage(enumerate(t), spec);
  CHECK(cov.pass());
  CHECK(cov.visited == 16);
}

TEST_CASE("map_indexes: single index on a 1-clock") {
  const auto spec = parse_spec("space I[2]; a(I) = b(I);");
  const auto t = map_indexes(spec, make_clock(1, 2), parse_mapping("I=1"));
  REQUIRE(t.nests[0].nodes.size() == 1);
  check_node(t.nests[0].nodes[0], "I", 1, {}, 2);
}

TEST_CASE("map_indexes: errors") {
  const auto spec = parse_spec(kMatmul);
  CHECK_THROWS_AS(map_indexes(spec, make_clock(3, 2, 2), parse_mapping("K=8,I=4")),
                  ScheduleError);
  CHECK_THROWS_AS(map_indexes(spec, make_clock(3, 2, 2), parse_mapping("K=8,I=4,J=2,X=64")),
                  ScheduleError);
  CHECK_THROWS_AS(map_indexes(spec, make_clock(3, 2, 2), parse_mapping("K=8,I=4,J=1")),
                  ScheduleError);
}

TEST_CASE("map_indexes + convolutions: matmul diagonal embedding") {
  const auto spec = parse_spec(kMatmul);
  const auto mapped = map_indexes(spec, make_clock(3, 2, 2), parse_mapping("K=8,I=4,J=2"));
  const auto t = apply_convolutions(mapped, 2);
  const auto &n = t.nests[0].nodes;
  REQUIRE(n.size() == 3);
  check_node(n[0], "K", 8, {}, 16);
  check_node(n[1], "I", 4, {"K"}, 8);
  check_node(n[2], "J", 2, {"I"}, 4);
  CHECK(n[1].convolved);
  CHECK(n[2].convolved);
  CHECK(check_coverage(enumerate(t), spec).pass());
  // One level only convolves I onto K.
  const auto one = apply_convolutions(mapped, 1);
  CHECK(one.nests[0].nodes[1].lower.bases == std::vector<std::string>{"K"});
  CHECK(one.nests[0].nodes[2].lower.bases.empty());
}

TEST_CASE("apply_convolutions: 3-clock skeleton") {
  const auto sk = clock_skeleton(make_clock(3, 2));
  const auto t = apply_convolutions(sk, 2);
  const auto &n = t.nests[0].nodes;
  REQUIRE(n.size() == 3);
  check_node(n[0], "T", 4, {}, 8);
  check_node(n[1], "TXN", 2, {"T"}, 4);
  check_node(n[2], "TYN", 1, {"TXN"}, 2);
  CHECK(apply_convolutions(sk, 0) == sk);
  CHECK_THROWS_AS(apply_convolutions(sk, 3), ScheduleError);
  // Conservation: the time-value multiset is unchanged.
  CHECK(time_values(t) == time_values(sk));
}

TEST_CASE("product_skeleton: 6-clock as 3-clock x 3-clock") {
  const auto f = factorize(make_clock(6, 2), make_clock(3, 2));
  const auto t = product_skeleton(f, false);
  const auto &n = t.nests[0].nodes;
  REQUIRE(n.size() == 6);
  CHECK(n[0].index == "TG");
  CHECK(n[0].step == 32);
  CHECK(n[0].extent == 64);
  std::multiset<std::int64_t> expect;
  for (std::int64_t v = 0; v < 64; ++v)
    expect.insert(v);
  CHECK(time_values(t) == expect);
  CHECK(time_values(product_skeleton(f, true)) == expect);
}

TEST_CASE("unfold: sum reduction into private cells") {
  const auto spec = parse_spec(kSum);
  const auto t = unfold(sequential_schedule(spec), "T", 2);
  REQUIRE(t.nests.size() == 2);
  CHECK(t.temp_plan.privatized.size() == 2);
  CHECK(t.temp_plan.unfold_width == 2);
  std::set<int> cells;
  for (const auto &p : t.temp_plan.privatized)
    cells.insert(p.cell);
  CHECK(cells.size() == 2);
  CHECK(equivalent(spec, sequential_schedule(spec), t, 10).pass());
  // One copy: unchanged nest, nothing privatized.
  const auto one = unfold(sequential_schedule(spec), "T", 1);
  CHECK(one.nests == sequential_schedule(spec).nests);
  CHECK(one.temp_plan.privatized.empty());
}

TEST_CASE("unfold: transpose copies touch disjoint points") {
  const auto spec = parse_spec("space I[8],J[8]; a(I,J) = a(J,I);");
  const auto t = unfold(sequential_schedule(spec), "I", 2);
  REQUIRE(t.nests.size() == 2);
  CHECK(t.nests[0].nodes[0].lower.constant == 0);
  CHECK(t.nests[1].nodes[0].lower.constant == 4);
  std::set<Point> by_copy[2];
  for (const auto &r : enumerate(t).records)
    by_copy[r.copy].insert(r.lattice_point);
  CHECK(by_copy[0].size() + by_copy[1].size() == 64);
  for (const auto &p : by_copy[0])
    CHECK(by_copy[1].count(p) == 0);
  CHECK(visited(t) == visited(sequential_schedule(spec)));
  CHECK(check_dependencies(enumerate(t), spec, t.temp_plan).pass());
  CHECK(equivalent(spec, sequential_schedule(spec), t, 10).pass());
}

TEST_CASE("unfold: errors") {
  const auto seq = sequential_schedule(parse_spec(kMatmul));
  CHECK_THROWS_AS(unfold(seq, "J", 2), ScheduleError);  // not the root
  CHECK_THROWS_AS(unfold(seq, "I", 3), ScheduleError);  // not a power of two
  CHECK_THROWS_AS(unfold(seq, "I", 4), ScheduleError);  // more copies than values
  // Copies that both assign the same location cannot be made independent.
  const auto chain = parse_spec("space I[2],J[2]; x(J) = b(I,J);");
  CHECK_THROWS_AS(unfold(sequential_schedule(chain), "I", 2), ScheduleError);
}

TEST_CASE("allocate_temporaries: transpose budget 2 gives width 2") {
  const auto spec = parse_spec(kTranspose);
  const auto deps = extract_dependencies(spec);
  const auto plan = allocate_temporaries(spec, deps, 2);
  CHECK(plan.unfold_width == 2);
  CHECK(plan.locations == 2);
  CHECK(plan.minimal == 1);
  const auto p1 = allocate_temporaries(spec, deps, 1);
  CHECK(p1.unfold_width == 1);
  CHECK(p1.locations == 1);
  try {
    allocate_temporaries(spec, deps, 0);
    FAIL("expected BudgetError");
  } catch (const BudgetError &e) {
    CHECK(e.minimal() == 1);
    CHECK(std::string(e.what()) ==
          "temporary budget 0 is below the minimal 1 cells required");
  }
}

TEST_CASE("allocate_temporaries: matmul needs nothing") {
  const auto spec = parse_spec(kMatmul);
  const auto plan = allocate_temporaries(spec, extract_dependencies(spec), 0);
  CHECK(plan.locations == 0);
  CHECK(plan.saves.empty());
  CHECK(plan.reads.empty());
}

TEST_CASE("allocate_temporaries: stencil budgets 0..8") {
  // The dependency checker decides; every plan must pass it, width must not
  // shrink as the budget grows, and the plan must fit the budget.
  const auto spec = parse_spec(kStencil);
  const auto deps = extract_dependencies(spec);
  int last_width = 0;
  std::int64_t first_parallel = -1;
  for (std::int64_t b = 0; b <= 8; ++b) {
    CAPTURE(b);
    const auto plan = allocate_temporaries(spec, deps, b);
    CHECK(plan.locations <= b);
    CHECK(plan.unfold_width >= last_width);
    last_width = plan.unfold_width;
    if (plan.unfold_width >= 2 && first_parallel < 0)
      first_parallel = b;
    const auto seq = sequential_schedule(spec);
    const auto tree = plan.unfold_width > 1
                          ? unfold(seq, "I", plan.unfold_width)
                          : seq;
    CHECK(tree.temp_plan.locations == plan.locations);
    CHECK(check_dependencies(enumerate(tree), spec, tree.temp_plan).pass());
    CHECK(equivalent(spec, seq, tree, 10).pass());
  }
  // Two row-halves: the second copy overwrites row 2 which the first still
  // reads, so the 4 cells of row 2 are captured before the copies start.
  CHECK(first_parallel == 4);
  // Below 4 the widest split that fits is found by brute force: none.
  for (std::int64_t b = 0; b < 4; ++b)
    CHECK(allocate_temporaries(spec, deps, b).unfold_width == 1);
}

TEST_CASE("plan_temporaries respects the budget") {
  const auto spec = parse_spec("space I[8],J[8]; a(I,J) = a(J,I);");
  const auto t = unfold(sequential_schedule(spec), "I", 2);
  CHECK_NOTHROW(plan_temporaries(t, t.temp_plan.locations));
  CHECK_THROWS_AS(plan_temporaries(t, t.temp_plan.locations - 1), BudgetError);
}

TEST_CASE("build_schedule: budget drives unfolding") {
  const auto spec = parse_spec(kTranspose);
  BuildOptions o;
  o.temp_budget = 2;
  const auto t = build_schedule(spec, o);
  CHECK(t.copies() == 2);
  CHECK(t.temp_plan.locations <= 2);
  o.temp_budget = 1;
  CHECK(build_schedule(spec, o).copies() == 1);
  o.temp_budget = 0;
  CHECK_THROWS_AS(build_schedule(spec, o), BudgetError);
}

TEST_CASE("build_schedule: stencil on the 4-clock (16,8,4,2)") {
  const auto spec = parse_spec(kStencil);
  BuildOptions o;
  o.mapping = parse_mapping("S=16,I=8,T=4,J=2");
  o.convolutions = 3;
  const auto t = build_schedule(spec, o);
  const auto &n = t.nests[0].nodes;
  REQUIRE(n.size() == 4);
  CHECK(n[0].index == "S");
  CHECK(n[0].role == NodeRole::Tile);
  CHECK(n[1].index == "I");
  CHECK(n[2].role == NodeRole::Tile);
  const auto tr = enumerate(t);
  CHECK(check_coverage(tr, spec).pass());
  CHECK(check_dependencies(tr, spec, t.temp_plan).pass());
  // Unfolding the outer tile needs halo cells for the rows the second copy
  // overwrites before the first reads them.
  const auto u = unfold(t, "S", 2);
  CHECK(u.temp_plan.halo.size() == 4);
  CHECK(equivalent(spec, sequential_schedule(spec), u, 10).pass());
}

TEST_CASE("reverse map inverts the mapping on every point") {
  const auto spec = parse_spec("space I[3],J[5]; a(I,J) = b(J,I);");
  BuildOptions o;
  o.mapping = parse_mapping("J=8,T=4,I=1");
  o.convolutions = 1;
  const auto t = build_schedule(spec, o);
  const auto tr = enumerate(t);
  const auto cov = check_coverage(tr, spec);
  CHECK(cov.pass());
  for (const auto &r : tr.records) {
    CHECK(r.lattice_point[0] < 3);
    CHECK(r.lattice_point[1] < 5);
  }
}

TEST_CASE("build_schedule refuses convolutions that race on a definition") {
  // Convolving the summed index puts points that all define S side by side.
  const auto spec = parse_spec("space I[2],J[2]; S += a(I,J);");
  BuildOptions o;
  o.convolutions = 1;
  try {
    build_schedule(spec, o);
    FAIL("expected a ScheduleError");
  } catch (const ScheduleError &e) {
    CHECK(std::string(e.what()).find("define S twice") != std::string::npos);
  }
  // The same index space with a per-point result is fine.
  const auto ok = parse_spec("space I[2],J[2]; s(I,J) += a(I,J);");
  CHECK_NOTHROW(build_schedule(ok, o));
}
