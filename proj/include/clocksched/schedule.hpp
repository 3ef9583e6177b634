// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// ScheduleTree: nested enumeration nodes over a time-index space.
//
// Every node enumerates
//
//   for (X = lower; X < lower + extent; X += step)
//
// where lower is a sum of enclosing node variables plus a constant. The
// digit of a node is (X - sum of its base variables) / step, and the lattice
// value of a spec index is a weighted sum of node digits (its reverse map).

#pragma once

#include <clocksched/access.hpp>
#include <clocksched/clock.hpp>
#include <clocksched/formula_ir.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clocksched {

enum class NodeRole {
  Clock,   // bare clock graduation (skeletons)
  Lattice, // a spec index
  Tile     // synthetic index selecting a block of the spec index below it
};

struct AffineLower {
  std::vector<std::string> bases;
  std::int64_t constant = 0;

  bool operator==(const AffineLower &) const = default;
};

struct Guard {
  enum class Kind {
    Bound,    // lattice value of `index` < limit (padding)
    OrbitRep  // the point represents its orbit under the tree's cycle
  };
  Kind kind = Kind::Bound;
  std::string index;
  std::int64_t limit = 0;

  bool operator==(const Guard &) const = default;
};

struct EnumNode {
  std::string index;
  NodeRole role = NodeRole::Lattice;
  std::int64_t step = 1;
  AffineLower lower;
  std::int64_t extent = 1;
  // Lower bound rewritten to an enclosing value (reached via convolution).
  bool convolved = false;
  std::vector<Guard> guards;

  std::int64_t count() const { return extent / step; }
  bool operator==(const EnumNode &) const = default;
};

struct Nest {
  int copy = 0;
  std::vector<EnumNode> nodes; // outermost first

  bool operator==(const Nest &) const = default;
};

struct DigitTerm {
  std::string node;
  std::int64_t weight = 1;

  bool operator==(const DigitTerm &) const = default;
};

struct ReverseMap {
  std::string index;
  std::vector<DigitTerm> terms;

  bool operator==(const ReverseMap &) const = default;
};

struct GradAssignment {
  std::string index;
  std::int64_t graduation = 1;
  std::int64_t size = 0; // synthetic indexes only; 0 means 2

  bool operator==(const GradAssignment &) const = default;
};

struct GradMapping {
  std::vector<GradAssignment> assignments;
  // graduation -> representative index, filled by map_indexes
  std::vector<std::pair<std::int64_t, std::string>> representatives;

  bool empty() const { return assignments.empty(); }
  bool operator==(const GradMapping &) const = default;
};

// Temporary storage bindings. Events and reads are identified by
// AccessModel::event_key / read_key, so a plan is independent of the order
// in which a trace visits points.
struct TempSave {
  std::int64_t event = 0; // copy main[location] to cell before this write
  LocationId location = 0;
  int cell = 0;

  bool operator==(const TempSave &) const = default;
};

struct TempRead {
  std::int64_t read = 0; // this operand read is served from cell
  int cell = 0;

  bool operator==(const TempRead &) const = default;
};

struct HaloCell {
  LocationId location = 0; // loaded before the copies start
  int cell = 0;

  bool operator==(const HaloCell &) const = default;
};

struct PrivateCell {
  LocationId location = 0; // copy's accumulations go to cell, summed after
  int copy = 0;
  int cell = 0;

  bool operator==(const PrivateCell &) const = default;
};

struct TempPlan {
  int locations = 0;    // total cells
  int pool = 0;         // cells per copy for in-copy saves
  int minimal = 0;      // cells the sequential enumeration needs
  int unfold_width = 1; // widest unfold that fits the budget
  std::vector<TempSave> saves;
  std::vector<TempRead> reads;
  std::vector<HaloCell> halo;
  std::vector<PrivateCell> privatized;

  bool operator==(const TempPlan &) const = default;
};

struct ScheduleTree {
  std::optional<ComputationSpec> spec; // absent for bare clock skeletons
  std::optional<Clock> clock;
  GradMapping mapping;
  std::vector<Nest> nests; // one per unfold copy
  std::vector<ReverseMap> reverse_map;
  std::optional<int> orbit_formula;
  TempPlan temp_plan;

  int copies() const { return static_cast<int>(nests.size()); }
  const ReverseMap *reverse_of(const std::string &index) const;
  bool operator==(const ScheduleTree &) const = default;
};

} // namespace clocksched
