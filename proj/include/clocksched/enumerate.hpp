// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Executes schedule trees (and sparse graphs) into visit traces.

#pragma once

#include <clocksched/schedule.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clocksched {

struct VisitRecord {
  std::int64_t seq = 0;
  // Offsets (value minus base sum) per node of the nest, outermost first.
  std::vector<std::int64_t> time_point;
  Point lattice_point;
  std::int64_t time_value = 0; // sum of time_point
  int color = 0;
  int level = 0; // convolved nodes with a nonzero offset
  int copy = 0;

  bool operator==(const VisitRecord &) const = default;
};

struct VisitTrace {
  std::vector<std::string> coordinates; // node names of the first nest
  std::vector<bool> convolved;          // per coordinate
  int color_k = 0;                      // colors are color_of(time_value, k)
  std::int64_t empty_slots = 0;         // sparse: guarded unit slots
  std::vector<VisitRecord> records;

  bool operator==(const VisitTrace &) const = default;
};

// Streams the records of a tree in order without materializing them.
// Suitable for spaces too large to hold as a trace.
void for_each_visit(const ScheduleTree &tree,
                    const std::function<void(const VisitRecord &)> &fn);

// The header fields of the trace enumerate() would produce (no records).
VisitTrace trace_header(const ScheduleTree &tree);

VisitTrace enumerate(const ScheduleTree &tree);

struct SparseGraph {
  std::int64_t vertex_count = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges; // sorted, unique

  static SparseGraph from_edges(
      std::vector<std::pair<std::int64_t, std::int64_t>> edges,
      std::int64_t vertex_count = 0);
  // "u v" per line; '#' starts a comment.
  static SparseGraph parse_edge_list(std::string_view text);

  std::vector<std::vector<std::int64_t>> adjacency() const;
};

enum class SparseOrder { DepthFirst, BreadthFirst };

// Vertex discovery order from origin 0. Throws on a back edge (cycle) or an
// unreachable vertex.
std::vector<std::int64_t> discovery_order(const SparseGraph &graph,
                                          SparseOrder order);

// Packs discovered vertexes into consecutive slots of unit clocks.
VisitTrace enumerate_sparse(const SparseGraph &graph, const Clock &unit,
                            SparseOrder order = SparseOrder::DepthFirst);

} // namespace clocksched
