// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Map-reduce formulas over Cartesian index spaces: the DSL front end,
// legality rules and the def/use structure that every schedule must keep.

#pragma once

#include <clocksched/error.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clocksched {

struct IndexDecl {
  std::string name;
  std::int64_t size = 1;
  SourcePos pos;

  bool operator==(const IndexDecl &o) const {
    return name == o.name && size == o.size;
  }
};

// An index plus a displacement. The exponent is kept only so that the
// legality check can reject squared indexes; legal factors have exponent 1.
struct Factor {
  std::string index;
  std::int64_t displacement = 0;
  int exponent = 1;
  SourcePos pos;

  bool operator==(const Factor &o) const {
    return index == o.index && displacement == o.displacement &&
           exponent == o.exponent;
  }
};

struct ArrayRef {
  std::string array;
  std::vector<Factor> factors;
  SourcePos pos;

  bool operator==(const ArrayRef &o) const {
    return array == o.array && factors == o.factors;
  }
};

// One item of a product: an array reference or a parenthesised sub-product.
struct TermItem {
  ArrayRef ref;
  bool grouped = false;
  std::vector<TermItem> group;

  bool operator==(const TermItem &) const = default;
};

// A product of items, as written.
struct Term {
  std::vector<TermItem> items;

  bool operator==(const Term &) const = default;
};

enum class FormulaOp { Assign, Accumulate };

struct Formula {
  ArrayRef result;
  FormulaOp op = FormulaOp::Assign;
  std::vector<Term> operands; // summed
  SourcePos pos;

  bool operator==(const Formula &o) const {
    return result == o.result && op == o.op && operands == o.operands;
  }
};

struct ComputationSpec {
  std::vector<IndexDecl> indexes;
  std::vector<Formula> formulas;

  bool operator==(const ComputationSpec &) const = default;

  // Position of an index in declaration order, or -1.
  int index_position(std::string_view name) const;
  std::int64_t size_of(std::string_view name) const;
  std::int64_t point_count() const;
};

// Array references of a term, flattened left to right through groups.
std::vector<const ArrayRef *> flatten(const Term &term);

// All operand references of a formula in textual order. The position of a
// reference in this list is its "ref" number throughout the library.
std::vector<const ArrayRef *> operand_refs(const Formula &formula);

// Maximum parenthesis depth of a term; an ungrouped reference has depth 1.
int nesting_depth(const Term &term);

ComputationSpec parse_spec(std::string_view text);
std::string print_spec(const ComputationSpec &spec);
std::string print_formula(const Formula &formula);

struct Violation {
  int formula = -1;
  SourcePos pos;
  std::string message;
};

struct LegalityReport {
  std::vector<Violation> violations;

  bool legal() const { return violations.empty(); }
};

LegalityReport check_legality(const ComputationSpec &spec);

// Throws Error listing the violations when the spec is not legal.
void require_legal(const ComputationSpec &spec);

struct DependencyEdge {
  std::string array;
  int def_formula = -1;
  int use_formula = -1;
  int use_ref = -1; // -1 for the implicit read of an accumulation
  std::vector<std::int64_t> displacement;
  bool accumulate = false;
};

struct IndexCycle {
  std::vector<std::string> indexes; // I, J for I->J->I

  std::size_t length() const { return indexes.size(); }
  std::string text() const;
  bool operator==(const IndexCycle &) const = default;
};

struct DependencyGraph {
  std::vector<DependencyEdge> edges;
  std::vector<IndexCycle> cycles;

  std::size_t max_cycle_length() const;
};

DependencyGraph extract_dependencies(const ComputationSpec &spec);

// Index of the first formula whose result is read back through a pure
// permutation of its result indexes (a transpose-like cycle of length >= 2)
// over equally sized indexes, or nullopt.
std::optional<int> cyclic_formula(const ComputationSpec &spec);

} // namespace clocksched
