// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force checks of schedules against the reference semantics.

#pragma once

#include <clocksched/enumerate.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clocksched {

// Used when no seed is given.
inline constexpr std::uint64_t kDefaultSeed = 20260417;

// Unbounded integers: products of many operands outgrow any fixed width.
using Value = boost::multiprecision::cpp_int;

// Dense exact-integer arrays laid out like AccessModel locations.
class ArrayStore {
public:
  explicit ArrayStore(const AccessModel &access);

  const AccessModel &access() const { return *access_; }
  Value &at(LocationId id) { return values_.at(static_cast<std::size_t>(id)); }
  const Value &at(LocationId id) const { return values_.at(static_cast<std::size_t>(id)); }
  const Value &get(const std::string &array, const std::vector<std::int64_t> &at) const;
  void set(const std::string &array, const std::vector<std::int64_t> &at, Value v);
  // Row-major fill of one array.
  void fill(const std::string &array, const std::vector<std::int64_t> &values);

  const std::vector<Value> &values() const { return values_; }
  bool operator==(const ArrayStore &o) const { return values_ == o.values_; }
  // First differing location as "a(1,0): 5 vs 7", or empty.
  std::string diff(const ArrayStore &o) const;

private:
  const AccessModel *access_;
  std::vector<Value> values_;
};

// Values drawn uniformly from [-9, 9].
ArrayStore random_store(const AccessModel &access, std::uint64_t seed);

struct CoverageReport {
  std::int64_t expected = 0;
  std::int64_t visited = 0;
  std::vector<Point> missing;
  std::vector<Point> duplicated;
  std::vector<Point> outside;

  bool pass() const { return missing.empty() && duplicated.empty() && outside.empty(); }
  std::string text() const;
};

CoverageReport check_coverage(const VisitTrace &trace, const ComputationSpec &spec);

struct DependencyViolation {
  std::int64_t seq = -1; // record, or -1 for end-of-run checks
  std::string location;
  std::string message;
};

struct DependencyReport {
  std::vector<DependencyViolation> violations;
  int cells_used = 0;
  // Some accumulations run in a different order than the reference; exact
  // addition makes that harmless.
  bool commutes = false;

  bool pass() const { return violations.empty(); }
  std::string text() const;
};

// Replays the trace against the plan's routing, tracking which version of
// every location main memory and each temp cell hold, and compares every
// read and every final value with the reference.
DependencyReport check_dependencies(const VisitTrace &trace,
                                    const ComputationSpec &spec,
                                    const TempPlan &plan);

enum class Interleaving {
  Sequential,    // trace order
  ReverseCopies, // last copy first
  RoundRobin     // one record of each copy in turn
};

// Executes the formulas along the trace, routing temp traffic per plan.
ArrayStore interpret(const ComputationSpec &spec, const VisitTrace &trace,
                     const TempPlan &plan, const ArrayStore &inputs,
                     Interleaving order = Interleaving::Sequential);

// Direct lexicographic execution with value snapshotting.
ArrayStore reference_interpret(const ComputationSpec &spec,
                               const ArrayStore &inputs);

struct EquivalenceReport {
  int trials = 0;
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> failed_trial;
  std::string counterexample;

  bool pass() const { return !failed_trial; }
  std::string text() const;
};

// Interprets both trees (every interleaving of unfolded ones) on `trials`
// random stores; pass iff all final stores agree.
EquivalenceReport equivalent(const ComputationSpec &spec, const ScheduleTree &a,
                             const ScheduleTree &b, int trials,
                             std::uint64_t seed = kDefaultSeed);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool operator==(const Rational &) const = default;
  std::string text() const;
};

Rational operator+(Rational a, Rational b);

struct ParallelismProfile {
  std::int64_t total = 0;
  std::vector<std::int64_t> widths;         // per convolution level
  std::map<int, std::int64_t> colors;       // color -> records
  std::int64_t locality = 0;                // unit-step transitions
  std::map<int, Rational> measure;          // colors / total

  std::string text() const;
};

// width[l]: largest group of records of one copy that agree on every time
// coordinate except the l innermost convolved ones. locality: consecutive
// records of one copy whose unconvolved time coordinates differ.
ParallelismProfile analyze(const VisitTrace &trace);

struct ParallelConflict {
  std::int64_t first_seq = 0;
  std::int64_t second_seq = 0;
  std::string location;
};

// Records of one copy that share the unconvolved time coordinates form a
// parallel group; reports groups whose members define the same location.
std::vector<ParallelConflict> check_parallel_defs(const VisitTrace &trace,
                                                  const ComputationSpec &spec);

} // namespace clocksched
