// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace clocksched {

struct SourcePos {
  int line = 0;
  int column = 0;

  bool operator==(const SourcePos &) const = default;
};

// Base class for every diagnostic the library raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(SourcePos pos, const std::string &message)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
              ": " + message),
        pos_(pos) {}

  SourcePos pos() const { return pos_; }

private:
  SourcePos pos_;
};

// A schedule could not be built or is structurally malformed.
class ScheduleError : public Error {
public:
  using Error::Error;
};

// The requested temporary budget is below what the enumeration needs.
class BudgetError : public ScheduleError {
public:
  BudgetError(long long budget, long long minimal)
      : ScheduleError("temporary budget " + std::to_string(budget) +
                      " is below the minimal " + std::to_string(minimal) +
                      " cells required"),
        minimal_(minimal) {}

  long long minimal() const { return minimal_; }

private:
  long long minimal_;
};

} // namespace clocksched
