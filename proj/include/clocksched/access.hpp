// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Concrete memory accesses of a ComputationSpec and the reference meaning
// every schedule has to reproduce.
//
// Reference order: lattice points in lexicographic declaration order, and at
// each point the formulas in listed order. Each formula reads all of its
// operands and then writes its result (assign) or adds into it (accumulate).
// A read of the formula's own result array observes the value the location
// held before this formula first modified it (value snapshotting); any other
// read observes the current value. Reads outside an array's extent yield 0.

#pragma once

#include <clocksched/formula_ir.hpp>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace clocksched {

using Point = std::vector<std::int64_t>;

// Flat id of one array element: array base offset plus row-major position.
using LocationId = std::int64_t;
inline constexpr LocationId kOutside = -1;

struct ArrayInfo {
  std::string name;
  std::vector<std::int64_t> extents;
  LocationId base = 0;

  std::int64_t volume() const;
};

class AccessModel {
public:
  explicit AccessModel(const ComputationSpec &spec);

  struct RefAccess {
    int array = 0;
    std::vector<int> positions; // index position in the lattice point
    std::vector<std::int64_t> displacement;
    bool self = false; // reads the formula's own result array
  };

  struct FormulaAccess {
    int result_array = 0;
    std::vector<int> result_positions;
    bool accumulate = false;
    std::vector<RefAccess> refs;
    std::vector<std::vector<int>> terms; // ref numbers per summed product
  };

  const ComputationSpec &spec() const { return *spec_; }
  const std::vector<ArrayInfo> &arrays() const { return arrays_; }
  const std::vector<FormulaAccess> &formulas() const { return formulas_; }
  int formula_count() const { return static_cast<int>(formulas_.size()); }
  int max_refs() const { return max_refs_; }
  LocationId location_count() const { return location_count_; }
  int array_id(const std::string &name) const;

  std::int64_t point_key(const Point &p) const;
  Point point_of(std::int64_t key) const;
  bool in_space(const Point &p) const;

  LocationId write_location(int formula, const Point &p) const;
  LocationId read_location(int formula, int ref, const Point &p) const;
  LocationId location(int array, const std::vector<std::int64_t> &at) const;

  // Inverse of location(): array id and coordinates.
  std::pair<int, std::vector<std::int64_t>> decode(LocationId id) const;
  std::string describe(LocationId id) const;

  // Keys that identify events independently of the trace order.
  std::int64_t event_key(std::int64_t point, int formula) const {
    return point * formula_count() + formula;
  }
  std::int64_t read_key(std::int64_t point, int formula, int ref) const {
    return event_key(point, formula) * max_refs() + ref;
  }

private:
  const ComputationSpec *spec_;
  std::vector<ArrayInfo> arrays_;
  std::vector<FormulaAccess> formulas_;
  int max_refs_ = 1;
  LocationId location_count_ = 0;
};

// The permutation a transpose-like formula induces on lattice points: the
// point whose write location is read at p.
class OrbitMap {
public:
  OrbitMap(const ComputationSpec &spec, int formula);

  int formula() const { return formula_; }
  Point apply(const Point &p) const;
  // The orbit of p starting at p.
  std::vector<Point> orbit(const Point &p) const;
  // p is the lexicographically largest member of its orbit.
  bool is_representative(const Point &p) const;
  // When the cycle swaps two indexes: (outer, inner) positions in
  // declaration order; otherwise {-1,-1}.
  std::pair<int, int> swapped_pair() const { return swap_; }

private:
  int formula_;
  // target[pos] = source position: apply(p)[target_pos] = p[source_pos]
  std::vector<std::pair<int, int>> moves_;
  std::pair<int, int> swap_{-1, -1};
};

// State of a location as a set of events: the last assignment (or -1 for
// the initial value) and the accumulations applied after it.
struct VersionState {
  std::int64_t writer = -1;
  std::vector<std::int64_t> accums; // sorted event keys

  bool operator==(const VersionState &) const = default;
  void accumulate(std::int64_t event);
};

std::string describe_state(const VersionState &s);

class ReferenceModel {
public:
  explicit ReferenceModel(const AccessModel &access);

  const AccessModel &access() const { return *access_; }
  // Expected state of an in-bounds read, keyed by AccessModel::read_key.
  const VersionState *expected(std::int64_t read_key) const;
  const VersionState &final_state(LocationId id) const;

private:
  const AccessModel *access_;
  std::unordered_map<std::int64_t, VersionState> expected_;
  std::vector<VersionState> final_;
};

// Iterates the declared index space in lexicographic declaration order.
template <class Fn> void for_each_point(const ComputationSpec &spec, Fn &&fn) {
  Point p(spec.indexes.size(), 0);
  for (const auto &d : spec.indexes)
    if (d.size <= 0)
      return;
  for (;;) {
    fn(static_cast<const Point &>(p));
    int i = static_cast<int>(p.size()) - 1;
    while (i >= 0) {
      if (++p[static_cast<std::size_t>(i)] <
          spec.indexes[static_cast<std::size_t>(i)].size)
        break;
      p[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0)
      return;
  }
}

} // namespace clocksched
