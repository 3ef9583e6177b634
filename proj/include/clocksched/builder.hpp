// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Builds clock-structured schedule trees from computation specs.

#pragma once

#include <clocksched/schedule.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clocksched {

struct PaddedSpec {
  ComputationSpec spec; // sizes rounded up to powers of two
  std::vector<std::int64_t> declared;
  std::vector<Guard> guards; // one per padded index

  std::int64_t padded_points() const;
  std::int64_t guarded_points() const; // points that pass every guard
};

PaddedSpec pad_and_guard(const ComputationSpec &spec);

// Bare clock skeleton: nodes T, TX, TY, ... with step = graduation.
ScheduleTree clock_skeleton(const Clock &clock);

// Nested clocks, outermost factor first. Each inner factor's root starts at
// the innermost value of the factor enclosing it. With convolve_within every
// non-root node of a factor is lower-bounded by its parent.
ScheduleTree product_skeleton(const std::vector<Clock> &factors,
                              bool convolve_within);

// Lexicographic nest (declaration order unless `order` is given), step 1.
// Transpose-like formulas are grouped by orbit. Carries its temp plan.
ScheduleTree sequential_schedule(const ComputationSpec &spec,
                                 const std::vector<std::string> &order = {});

// "K=8,I=4,J=2"; a synthetic name may carry a size: "T=8:2".
GradMapping parse_mapping(std::string_view text);

// Nest in decreasing graduation order with step = graduation. Indexes that
// share a graduation are lower-bounded by its representative. Names that are
// not spec indexes are tiles of the next spec index below them.
ScheduleTree map_indexes(const ComputationSpec &spec, const Clock &clock,
                         const GradMapping &mapping);

// Lower bound of nodes 1..levels becomes the enclosing node's value.
// Clock nodes are renamed with an N suffix (TX -> TXN).
ScheduleTree apply_convolutions(ScheduleTree tree, int levels);

// Splits the outermost node `index` into `copies` nests and attaches the
// temp plan the copies need.
ScheduleTree unfold(ScheduleTree tree, const std::string &index, int copies);

// Temp plan for the tree's enumeration. Throws ScheduleError when the
// enumeration cannot preserve the reference semantics, BudgetError when it
// needs more than `budget` cells.
TempPlan plan_temporaries(const ScheduleTree &tree,
                          std::optional<std::int64_t> budget = std::nullopt);

// Plan for the widest unfold of the sequential schedule that fits `budget`.
TempPlan allocate_temporaries(const ComputationSpec &spec,
                              const DependencyGraph &deps,
                              std::int64_t budget);

struct BuildOptions {
  std::optional<Clock> clock;
  GradMapping mapping;
  int convolutions = 0;
  std::vector<std::string> order;
  std::optional<std::string> unfold_index;
  int unfold_copies = 1;
  std::optional<std::int64_t> temp_budget;
};

ScheduleTree build_schedule(const ComputationSpec &spec,
                            const BuildOptions &options);

} // namespace clocksched
