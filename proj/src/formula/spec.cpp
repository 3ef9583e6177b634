// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/formula_ir.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace clocksched {

int ComputationSpec::index_position(std::string_view name) const {
  for (std::size_t i = 0; i < indexes.size(); ++i)
    if (indexes[i].name == name)
      return static_cast<int>(i);
  return -1;
}

std::int64_t ComputationSpec::size_of(std::string_view name) const {
  const int p = index_position(name);
  if (p < 0)
    throw Error("unknown index '" + std::string(name) + "'");
  return indexes[static_cast<std::size_t>(p)].size;
}

std::int64_t ComputationSpec::point_count() const {
  std::int64_t n = 1;
  for (const auto &d : indexes)
    n *= d.size;
  return n;
}

namespace {

void flatten_items(const std::vector<TermItem> &items,
                   std::vector<const ArrayRef *> &out) {
  for (const auto &it : items) {
    if (it.grouped)
      flatten_items(it.group, out);
    else
      out.push_back(&it.ref);
  }
}

int items_depth(const std::vector<TermItem> &items) {
  int depth = 0;
  for (const auto &it : items)
    depth = std::max(depth, it.grouped ? 1 + items_depth(it.group) : 1);
  return depth;
}

std::string print_factor(const Factor &f) {
  std::string s = f.index;
  if (f.exponent != 1)
    s += "^" + std::to_string(f.exponent);
  if (f.displacement > 0)
    s += "+" + std::to_string(f.displacement);
  else if (f.displacement < 0)
    s += std::to_string(f.displacement);
  return s;
}

std::string print_ref(const ArrayRef &r) {
  if (r.factors.empty())
    return r.array;
  std::string s = r.array + "(";
  for (std::size_t i = 0; i < r.factors.size(); ++i) {
    if (i)
      s += ",";
    s += print_factor(r.factors[i]);
  }
  return s + ")";
}

std::string print_items(const std::vector<TermItem> &items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i)
      s += "*";
    if (items[i].grouped)
      s += "(" + print_items(items[i].group) + ")";
    else
      s += print_ref(items[i].ref);
  }
  return s;
}

} // namespace

std::vector<const ArrayRef *> flatten(const Term &term) {
  std::vector<const ArrayRef *> out;
  flatten_items(term.items, out);
  return out;
}

std::vector<const ArrayRef *> operand_refs(const Formula &formula) {
  std::vector<const ArrayRef *> out;
  for (const auto &t : formula.operands)
    flatten_items(t.items, out);
  return out;
}

int nesting_depth(const Term &term) { return items_depth(term.items); }

std::string print_formula(const Formula &formula) {
  std::string s = print_ref(formula.result);
  s += formula.op == FormulaOp::Accumulate ? " += " : " = ";
  for (std::size_t i = 0; i < formula.operands.size(); ++i) {
    if (i)
      s += "+";
    s += print_items(formula.operands[i].items);
  }
  return s;
}

std::string print_spec(const ComputationSpec &spec) {
  std::string s = "space ";
  for (std::size_t i = 0; i < spec.indexes.size(); ++i) {
    if (i)
      s += ",";
    s += spec.indexes[i].name + "[" + std::to_string(spec.indexes[i].size) +
         "]";
  }
  s += ";\n";
  for (const auto &f : spec.formulas)
    s += print_formula(f) + ";\n";
  return s;
}

LegalityReport check_legality(const ComputationSpec &spec) {
  LegalityReport report;
  std::map<std::string, std::size_t> arity;
  auto note_arity = [&](int fi, const ArrayRef &r) {
    auto [it, inserted] = arity.emplace(r.array, r.factors.size());
    if (!inserted && it->second != r.factors.size())
      report.violations.push_back(
          {fi, r.pos,
           "array '" + r.array + "' used with " + std::to_string(it->second) +
               " and " + std::to_string(r.factors.size()) + " indexes"});
  };
  for (std::size_t i = 0; i < spec.formulas.size(); ++i) {
    const int fi = static_cast<int>(i);
    const Formula &f = spec.formulas[i];
    note_arity(fi, f.result);
    for (const auto &fac : f.result.factors) {
      if (fac.exponent != 1)
        report.violations.push_back(
            {fi, fac.pos, "exponent > 1 on result index '" + fac.index + "'"});
      if (fac.displacement != 0)
        report.violations.push_back(
            {fi, fac.pos,
             "result index '" + fac.index + "' carries a displacement"});
    }
    for (const auto &term : f.operands) {
      if (nesting_depth(term) > 2)
        report.violations.push_back(
            {fi, f.pos,
             "parenthesis nesting depth " +
                 std::to_string(nesting_depth(term)) + " exceeds 2"});
    }
    for (const ArrayRef *r : operand_refs(f)) {
      note_arity(fi, *r);
      for (const auto &fac : r->factors) {
        if (fac.exponent != 1)
          report.violations.push_back(
              {fi, fac.pos, "exponent > 1 on index '" + fac.index + "'"});
        if (fac.displacement < 0)
          report.violations.push_back(
              {fi, fac.pos,
               "negative displacement on index '" + fac.index + "'"});
      }
    }
  }
  return report;
}

void require_legal(const ComputationSpec &spec) {
  const LegalityReport report = check_legality(spec);
  if (report.legal())
    return;
  std::string msg = "illegal formulas:";
  for (const auto &v : report.violations)
    msg += "\n  " + std::to_string(v.pos.line) + ":" +
           std::to_string(v.pos.column) + ": " + v.message;
  throw Error(msg);
}

std::string IndexCycle::text() const {
  std::string s;
  for (const auto &n : indexes)
    s += n + "->";
  return s + (indexes.empty() ? std::string() : indexes.front());
}

std::size_t DependencyGraph::max_cycle_length() const {
  std::size_t m = 0;
  for (const auto &c : cycles)
    m = std::max(m, c.length());
  return m;
}

namespace {

// Cycles of the positional map result[i] -> operand[i]. Names that map to
// more than one target (possible with repeated indexes) break the chain.
std::vector<IndexCycle> positional_cycles(const ArrayRef &result,
                                          const ArrayRef &use) {
  std::map<std::string, std::set<std::string>> succ;
  for (std::size_t i = 0; i < result.factors.size() && i < use.factors.size();
       ++i)
    succ[result.factors[i].index].insert(use.factors[i].index);
  std::vector<IndexCycle> out;
  std::set<std::string> done;
  for (const auto &[start, _] : succ) {
    if (done.count(start))
      continue;
    std::vector<std::string> path{start};
    std::string cur = start;
    bool closed = false;
    for (std::size_t steps = 0; steps <= succ.size(); ++steps) {
      auto it = succ.find(cur);
      if (it == succ.end() || it->second.size() != 1)
        break;
      cur = *it->second.begin();
      if (cur == start) {
        closed = true;
        break;
      }
      if (std::find(path.begin(), path.end(), cur) != path.end())
        break;
      path.push_back(cur);
    }
    if (!closed)
      continue;
    for (const auto &n : path)
      done.insert(n);
    // Canonical rotation: start from the smallest name.
    std::rotate(path.begin(), std::min_element(path.begin(), path.end()),
                path.end());
    out.push_back({path});
  }
  return out;
}

} // namespace

DependencyGraph extract_dependencies(const ComputationSpec &spec) {
  DependencyGraph g;
  auto add_cycles = [&](const ArrayRef &result, const ArrayRef &use) {
    for (auto &c : positional_cycles(result, use))
      if (std::find(g.cycles.begin(), g.cycles.end(), c) == g.cycles.end())
        g.cycles.push_back(std::move(c));
  };
  for (std::size_t d = 0; d < spec.formulas.size(); ++d) {
    const Formula &def = spec.formulas[d];
    if (def.op == FormulaOp::Accumulate) {
      DependencyEdge e;
      e.array = def.result.array;
      e.def_formula = e.use_formula = static_cast<int>(d);
      e.use_ref = -1;
      e.displacement.assign(def.result.factors.size(), 0);
      e.accumulate = true;
      g.edges.push_back(e);
      add_cycles(def.result, def.result);
    }
    for (std::size_t u = 0; u < spec.formulas.size(); ++u) {
      const auto refs = operand_refs(spec.formulas[u]);
      for (std::size_t r = 0; r < refs.size(); ++r) {
        if (refs[r]->array != def.result.array)
          continue;
        DependencyEdge e;
        e.array = def.result.array;
        e.def_formula = static_cast<int>(d);
        e.use_formula = static_cast<int>(u);
        e.use_ref = static_cast<int>(r);
        for (const auto &fac : refs[r]->factors)
          e.displacement.push_back(fac.displacement);
        g.edges.push_back(e);
        add_cycles(def.result, *refs[r]);
      }
    }
  }
  return g;
}

std::optional<int> cyclic_formula(const ComputationSpec &spec) {
  for (std::size_t fi = 0; fi < spec.formulas.size(); ++fi) {
    const Formula &f = spec.formulas[fi];
    const auto &res = f.result.factors;
    std::set<std::string> distinct;
    for (const auto &fac : res)
      distinct.insert(fac.index);
    if (distinct.size() != res.size() || res.size() < 2)
      continue;
    for (const ArrayRef *r : operand_refs(f)) {
      if (r->array != f.result.array || r->factors.size() != res.size())
        continue;
      bool permutation = true, identity = true;
      std::set<std::string> seen;
      std::int64_t size = -1;
      for (std::size_t i = 0; i < res.size(); ++i) {
        const Factor &fac = r->factors[i];
        if (fac.displacement != 0 || !distinct.count(fac.index) ||
            !seen.insert(fac.index).second)
          permutation = false;
        if (fac.index != res[i].index)
          identity = false;
        const std::int64_t s = spec.size_of(res[i].index);
        if (size >= 0 && s != size)
          permutation = false;
        size = s;
      }
      if (permutation && !identity)
        return static_cast<int>(fi);
    }
  }
  return std::nullopt;
}

} // namespace clocksched
