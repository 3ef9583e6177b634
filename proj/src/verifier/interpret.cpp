// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/verifier.hpp>

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace clocksched {

namespace {

// Sum of products of the formula's operands; `read(ref)` yields one value.
template <class Read>
Value evaluate(const AccessModel::FormulaAccess &fa, Read &&read) {
  Value sum = 0;
  for (const auto &term : fa.terms) {
    Value prod = 1;
    for (int k : term)
      prod *= read(k);
    sum += prod;
  }
  return sum;
}

std::vector<const VisitRecord *> ordering(const VisitTrace &trace,
                                          Interleaving order) {
  std::vector<const VisitRecord *> out;
  if (order == Interleaving::Sequential) {
    for (const auto &r : trace.records)
      out.push_back(&r);
    return out;
  }
  std::vector<std::vector<const VisitRecord *>> copies;
  for (const auto &r : trace.records) {
    if (static_cast<std::size_t>(r.copy) >= copies.size())
      copies.resize(static_cast<std::size_t>(r.copy) + 1);
    copies[static_cast<std::size_t>(r.copy)].push_back(&r);
  }
  if (order == Interleaving::ReverseCopies) {
    for (auto it = copies.rbegin(); it != copies.rend(); ++it)
      out.insert(out.end(), it->begin(), it->end());
    return out;
  }
  for (std::size_t i = 0; out.size() < trace.records.size(); ++i)
    for (const auto &c : copies)
      if (i < c.size())
        out.push_back(c[i]);
  return out;
}

std::string point_text(const Point &p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

} // namespace

ArrayStore interpret(const ComputationSpec &spec, const VisitTrace &trace,
                     const TempPlan &plan, const ArrayStore &inputs,
                     Interleaving order) {
  const AccessModel &access = inputs.access();
  if (!(access.spec() == spec))
    throw Error("input store was laid out for a different spec");
  ArrayStore mem = inputs;
  std::unordered_map<std::int64_t, const TempSave *> saves;
  std::unordered_map<std::int64_t, int> reads;
  std::unordered_map<std::int64_t, int> priv; // location * copies + copy
  int cells = plan.locations;
  for (const auto &s : plan.saves) {
    saves[s.event] = &s;
    cells = std::max(cells, s.cell + 1);
  }
  for (const auto &r : plan.reads) {
    reads[r.read] = r.cell;
    cells = std::max(cells, r.cell + 1);
  }
  int copies = 1;
  for (const auto &r : trace.records)
    copies = std::max(copies, r.copy + 1);
  for (const auto &p : plan.privatized) {
    priv[p.location * copies + p.copy] = p.cell;
    cells = std::max(cells, p.cell + 1);
  }
  std::vector<Value> cell(static_cast<std::size_t>(cells), 0);
  for (const auto &h : plan.halo)
    cell.at(static_cast<std::size_t>(h.cell)) = mem.at(h.location);

  for (const VisitRecord *r : ordering(trace, order)) {
    const Point &p = r->lattice_point;
    if (!access.in_space(p))
      throw Error("index out of declared bounds at " + point_text(p));
    const std::int64_t pk = access.point_key(p);
    for (int f = 0; f < access.formula_count(); ++f) {
      const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
      const Value value = evaluate(fa, [&](int k) -> Value {
        const LocationId l = access.read_location(f, k, p);
        if (l == kOutside)
          return 0;
        if (auto it = reads.find(access.read_key(pk, f, k)); it != reads.end())
          return cell[static_cast<std::size_t>(it->second)];
        return mem.at(l);
      });
      const LocationId w = access.write_location(f, p);
      const std::int64_t ev = access.event_key(pk, f);
      if (auto it = saves.find(ev); it != saves.end())
        cell[static_cast<std::size_t>(it->second->cell)] = mem.at(w);
      if (auto it = priv.find(w * copies + r->copy); it != priv.end()) {
        cell[static_cast<std::size_t>(it->second)] += value;
      } else if (fa.accumulate) {
        mem.at(w) += value;
      } else {
        mem.at(w) = value;
      }
    }
  }
  for (const auto &p : plan.privatized)
    mem.at(p.location) += cell[static_cast<std::size_t>(p.cell)];
  return mem;
}

ArrayStore reference_interpret(const ComputationSpec &spec,
                               const ArrayStore &inputs) {
  const AccessModel &access = inputs.access();
  if (!(access.spec() == spec))
    throw Error("input store was laid out for a different spec");
  ArrayStore mem = inputs;
  const LocationId n = access.location_count();
  // Value of a location before formula f first modified it.
  std::unordered_map<std::int64_t, Value> before;
  for_each_point(spec, [&](const Point &p) {
    for (int f = 0; f < access.formula_count(); ++f) {
      const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
      const Value value = evaluate(fa, [&](int k) -> Value {
        const LocationId l = access.read_location(f, k, p);
        if (l == kOutside)
          return 0;
        if (fa.refs[static_cast<std::size_t>(k)].self)
          if (auto it = before.find(f * n + l); it != before.end())
            return it->second;
        return mem.at(l);
      });
      const LocationId w = access.write_location(f, p);
      before.emplace(f * n + w, mem.at(w));
      if (fa.accumulate)
        mem.at(w) += value;
      else
        mem.at(w) = value;
    }
  });
  return mem;
}

std::string EquivalenceReport::text() const {
  if (pass())
    return "equivalence: pass, " + std::to_string(trials) +
           " random stores (seed " + std::to_string(seed) + ")";
  return "equivalence: FAIL in trial " + std::to_string(*failed_trial) +
         " (seed " + std::to_string(seed) + "): " + counterexample;
}

EquivalenceReport equivalent(const ComputationSpec &spec, const ScheduleTree &a,
                             const ScheduleTree &b, int trials,
                             std::uint64_t seed) {
  for (const ScheduleTree *t : {&a, &b})
    if (t->spec && !(*t->spec == spec))
      throw Error("schedule was built for a different spec");
  const AccessModel access(spec);
  struct Run {
    const char *tree;
    Interleaving order;
    const char *name;
    const VisitTrace *trace;
    const TempPlan *plan;
  };
  const VisitTrace ta = enumerate(a), tb = enumerate(b);
  std::vector<Run> runs;
  auto add = [&](const char *tree, const ScheduleTree &t, const VisitTrace &tr) {
    runs.push_back({tree, Interleaving::Sequential, "sequential", &tr, &t.temp_plan});
    if (t.copies() > 1) {
      runs.push_back({tree, Interleaving::ReverseCopies, "reversed copies", &tr,
                      &t.temp_plan});
      runs.push_back({tree, Interleaving::RoundRobin, "round-robin", &tr,
                      &t.temp_plan});
    }
  };
  add("A", a, ta);
  add("B", b, tb);

  EquivalenceReport rep;
  rep.trials = trials;
  rep.seed = seed;
  for (int t = 0; t < trials; ++t) {
    const ArrayStore in = random_store(access, seed + static_cast<std::uint64_t>(t));
    std::optional<ArrayStore> base;
    for (const Run &run : runs) {
      std::optional<ArrayStore> out;
      try {
        out = interpret(spec, *run.trace, *run.plan, in, run.order);
      } catch (const Error &e) {
        rep.failed_trial = t;
        rep.counterexample = std::string("tree ") + run.tree + " (" + run.name +
                             "): " + e.what();
        return rep;
      }
      if (!base) {
        base = std::move(out);
        continue;
      }
      if (!(*out == *base)) {
        rep.failed_trial = t;
        rep.counterexample = base->diff(*out) + " (tree A sequential vs tree " +
                             run.tree + " " + run.name + ")";
        return rep;
      }
    }
  }
  return rep;
}

std::string Rational::text() const {
  return den == 1 ? std::to_string(num)
                  : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(Rational a, Rational b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  Rational r{a.num * (l / a.den) + b.num * (l / b.den), l};
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

std::string ParallelismProfile::text() const {
  std::string s = "points: " + std::to_string(total) + "\nwidths:";
  for (auto w : widths)
    s += " " + std::to_string(w);
  s += "\ncolors:";
  for (const auto &[c, n] : colors)
    s += " " + std::to_string(c) + ":" + std::to_string(n);
  s += "\nlocality: " + std::to_string(locality) + "\nmeasure:";
  for (const auto &[c, m] : measure)
    s += " " + std::to_string(c) + ":" + m.text();
  return s;
}

ParallelismProfile analyze(const VisitTrace &trace) {
  ParallelismProfile prof;
  prof.total = static_cast<std::int64_t>(trace.records.size());
  std::vector<std::size_t> conv;
  for (std::size_t i = 0; i < trace.convolved.size(); ++i)
    if (trace.convolved[i])
      conv.push_back(i);
  for (std::size_t l = 0; l <= conv.size(); ++l) {
    std::vector<bool> free(trace.convolved.size(), false);
    for (std::size_t j = conv.size() - l; j < conv.size(); ++j)
      free[conv[j]] = true;
    std::map<std::vector<std::int64_t>, std::int64_t> classes;
    std::int64_t width = 0;
    for (const VisitRecord &r : trace.records) {
      std::vector<std::int64_t> key{r.copy};
      for (std::size_t i = 0; i < r.time_point.size(); ++i)
        if (i >= free.size() || !free[i])
          key.push_back(r.time_point[i]);
      width = std::max(width, ++classes[key]);
    }
    prof.widths.push_back(width);
  }
  auto unconvolved = [&](const VisitRecord &r) {
    std::vector<std::int64_t> key;
    for (std::size_t i = 0; i < r.time_point.size(); ++i)
      if (i >= trace.convolved.size() || !trace.convolved[i])
        key.push_back(r.time_point[i]);
    return key;
  };
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    ++prof.colors[trace.records[i].color];
    if (i && trace.records[i].copy == trace.records[i - 1].copy &&
        unconvolved(trace.records[i]) != unconvolved(trace.records[i - 1]))
      ++prof.locality;
  }
  for (const auto &[c, n] : prof.colors) {
    const std::int64_t g = std::gcd(n, prof.total);
    prof.measure[c] = {n / g, prof.total / g};
  }
  return prof;
}

} // namespace clocksched
