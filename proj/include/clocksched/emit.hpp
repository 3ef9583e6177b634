// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Text and JSON renderings of schedules, traces and reports.

#pragma once

#include <clocksched/verifier.hpp>

#include <string>
#include <string_view>

namespace clocksched {

enum class Notation {
  For,  // C-like nested loops
  Form, // form [(..)\n      (..)] multiple-for block
  Enum  // nested enum(INDEX,STEP,[LO,HI))
};

Notation parse_notation(std::string_view name);

std::string emit(const ScheduleTree &tree, Notation notation);

// Schedule document; schedule_from_json(schedule_to_json(t)) == t.
std::string schedule_to_json(const ScheduleTree &tree);
ScheduleTree schedule_from_json(std::string_view text);

std::string trace_to_json(const VisitTrace &trace);

struct VerifyResult {
  CoverageReport coverage;
  DependencyReport dependencies;
  EquivalenceReport equivalence;

  bool pass() const {
    return coverage.pass() && dependencies.pass() && equivalence.pass();
  }
};

std::string verify_to_json(const VerifyResult &result);
std::string profile_to_json(const ParallelismProfile &profile);

} // namespace clocksched
