// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/verifier.hpp>

#include <algorithm>
#include <set>
#include <unordered_map>

namespace clocksched {

namespace {

std::string point_text(const Point &p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

std::string point_list(const std::vector<Point> &ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size() && i < 8; ++i)
    s += (i ? " " : "") + point_text(ps[i]);
  if (ps.size() > 8)
    s += " ...";
  return s;
}

} // namespace

std::string CoverageReport::text() const {
  std::string s = "coverage: " + std::string(pass() ? "pass" : "FAIL") + ", " +
                  std::to_string(visited) + " records for " +
                  std::to_string(expected) + " points";
  if (!missing.empty())
    s += "\n  missing " + std::to_string(missing.size()) + ": " +
         point_list(missing);
  if (!duplicated.empty())
    s += "\n  duplicated " + std::to_string(duplicated.size()) + ": " +
         point_list(duplicated);
  if (!outside.empty())
    s += "\n  outside " + std::to_string(outside.size()) + ": " +
         point_list(outside);
  return s;
}

CoverageReport check_coverage(const VisitTrace &trace,
                              const ComputationSpec &spec) {
  const AccessModel access(spec);
  CoverageReport rep;
  rep.expected = spec.point_count();
  rep.visited = static_cast<std::int64_t>(trace.records.size());
  std::vector<int> hits(static_cast<std::size_t>(rep.expected), 0);
  for (const VisitRecord &r : trace.records) {
    if (!access.in_space(r.lattice_point)) {
      rep.outside.push_back(r.lattice_point);
      continue;
    }
    if (hits[static_cast<std::size_t>(access.point_key(r.lattice_point))]++ == 1)
      rep.duplicated.push_back(r.lattice_point);
  }
  for (std::size_t k = 0; k < hits.size(); ++k)
    if (!hits[k])
      rep.missing.push_back(access.point_of(static_cast<std::int64_t>(k)));
  return rep;
}

std::string DependencyReport::text() const {
  std::string s = "dependencies: " + std::string(pass() ? "pass" : "FAIL") +
                  ", " + std::to_string(cells_used) + " temp cells";
  if (commutes)
    s += ", accumulations reordered (commutes)";
  for (std::size_t i = 0; i < violations.size() && i < 10; ++i)
    s += "\n  " + violations[i].message;
  if (violations.size() > 10)
    s += "\n  ... " + std::to_string(violations.size() - 10) + " more";
  return s;
}

DependencyReport check_dependencies(const VisitTrace &trace,
                                    const ComputationSpec &spec,
                                    const TempPlan &plan) {
  const AccessModel access(spec);
  const ReferenceModel ref(access);
  const int nf = access.formula_count();
  DependencyReport rep;
  auto violate = [&](std::int64_t seq, LocationId l, std::string msg) {
    rep.violations.push_back({seq, l == kOutside ? "" : access.describe(l),
                              std::move(msg)});
  };

  std::unordered_map<std::int64_t, const TempSave *> saves;
  std::unordered_map<std::int64_t, int> reads;
  std::map<std::pair<LocationId, int>, int> priv;
  int cells = 0;
  for (const auto &s : plan.saves) {
    saves[s.event] = &s;
    cells = std::max(cells, s.cell + 1);
  }
  for (const auto &r : plan.reads) {
    reads[r.read] = r.cell;
    cells = std::max(cells, r.cell + 1);
  }
  for (const auto &h : plan.halo)
    cells = std::max(cells, h.cell + 1);
  for (const auto &p : plan.privatized) {
    priv[{p.location, p.copy}] = p.cell;
    cells = std::max(cells, p.cell + 1);
  }
  rep.cells_used = cells;
  if (cells > plan.locations)
    violate(-1, kOutside,
            "plan uses " + std::to_string(cells) + " cells but declares " +
                std::to_string(plan.locations));

  struct CellState {
    bool live = false;
    int owner = -1; // -1: shared read-only halo value
    LocationId location = kOutside;
    VersionState state;
  };
  std::vector<CellState> cell(static_cast<std::size_t>(cells));
  for (const auto &h : plan.halo)
    cell[static_cast<std::size_t>(h.cell)] = {true, -1, h.location, {}};
  std::map<int, VersionState> private_state;

  std::map<LocationId, std::set<int>> mutators;
  std::map<int, std::vector<const VisitRecord *>> by_copy;
  for (const VisitRecord &r : trace.records) {
    by_copy[r.copy].push_back(&r);
    if (!access.in_space(r.lattice_point))
      continue;
    for (int f = 0; f < nf; ++f)
      mutators[access.write_location(f, r.lattice_point)].insert(r.copy);
  }
  auto other_mutator = [&](LocationId l, int copy) {
    auto it = mutators.find(l);
    if (it == mutators.end())
      return -1;
    for (int m : it->second)
      if (m != copy)
        return m;
    return -1;
  };

  std::map<int, std::map<LocationId, VersionState>> finals;
  const VersionState initial;
  for (auto &[copy, records] : by_copy) {
    std::map<LocationId, VersionState> &main = finals[copy];
    std::map<LocationId, std::int64_t> last_accum;
    auto state_of = [&](LocationId l) -> const VersionState & {
      auto it = main.find(l);
      return it == main.end() ? initial : it->second;
    };
    for (const VisitRecord *r : records) {
      const Point &p = r->lattice_point;
      if (!access.in_space(p)) {
        violate(r->seq, kOutside, "record " + std::to_string(r->seq) +
                                      " lies outside the index space at " +
                                      point_text(p));
        continue;
      }
      const std::int64_t pk = access.point_key(p);
      for (int f = 0; f < nf; ++f) {
        const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
        for (int k = 0; k < static_cast<int>(fa.refs.size()); ++k) {
          const LocationId l = access.read_location(f, k, p);
          if (l == kOutside)
            continue;
          const std::int64_t rk = access.read_key(pk, f, k);
          const VersionState *seen = nullptr;
          if (auto it = reads.find(rk); it != reads.end()) {
            const CellState &cs = cell[static_cast<std::size_t>(it->second)];
            const std::string name = "cell " + std::to_string(it->second);
            if (!cs.live)
              violate(r->seq, l, name + " read before it holds a value");
            else if (cs.owner != -1 && cs.owner != copy)
              violate(r->seq, l, name + " is shared between copies " +
                                     std::to_string(cs.owner) + " and " +
                                     std::to_string(copy));
            else if (cs.location != l)
              violate(r->seq, l, name + " holds " + access.describe(cs.location) +
                                     ", read of " + access.describe(l) +
                                     " expected at " + point_text(p));
            else
              seen = &cs.state;
          } else if (const int m = other_mutator(l, copy); m >= 0) {
            violate(r->seq, l, "race: copy " + std::to_string(copy) +
                                   " reads " + access.describe(l) +
                                   " which copy " + std::to_string(m) +
                                   " modifies");
          } else {
            seen = &state_of(l);
          }
          const VersionState &want = *ref.expected(rk);
          if (seen && !(*seen == want))
            violate(r->seq, l,
                    "read of " + access.describe(l) + " at " + point_text(p) +
                        " sees " + describe_state(*seen) + ", expected " +
                        describe_state(want));
        }
        const LocationId w = access.write_location(f, p);
        const std::int64_t ev = access.event_key(pk, f);
        if (auto it = saves.find(ev); it != saves.end()) {
          const TempSave &s = *it->second;
          CellState &cs = cell[static_cast<std::size_t>(s.cell)];
          if (s.location != w)
            violate(r->seq, w, "save before a write of " + access.describe(w) +
                                   " names " + access.describe(s.location));
          else if (cs.live && cs.owner != copy)
            violate(r->seq, w, "cell " + std::to_string(s.cell) +
                                   " is shared between copies");
          cs = {true, copy, w, state_of(w)};
        }
        if (auto it = priv.find({w, copy}); it != priv.end()) {
          if (!fa.accumulate)
            violate(r->seq, w, "assignment to privatized " + access.describe(w));
          private_state[it->second].accumulate(ev);
          continue;
        }
        if (const int m = other_mutator(w, copy); m >= 0)
          violate(r->seq, w, "write race on " + access.describe(w) +
                                 " between copies " + std::to_string(m) +
                                 " and " + std::to_string(copy));
        VersionState next = state_of(w);
        if (fa.accumulate) {
          auto [la, fresh] = last_accum.emplace(w, ev);
          if (!fresh) {
            rep.commutes = rep.commutes || ev < la->second;
            la->second = ev;
          }
          next.accumulate(ev);
        } else {
          next = VersionState{ev, {}};
          last_accum.erase(w);
        }
        main[w] = std::move(next);
      }
    }
  }

  std::map<LocationId, std::vector<int>> private_cells;
  for (const auto &pc : plan.privatized)
    private_cells[pc.location].push_back(pc.cell);
  for (LocationId l = 0; l < access.location_count(); ++l) {
    VersionState got;
    if (auto it = private_cells.find(l); it != private_cells.end()) {
      for (int c : it->second)
        for (auto ev : private_state[c].accums)
          got.accumulate(ev);
      for (int c : mutators[l])
        if (!priv.count({l, c}))
          violate(-1, l, "copy " + std::to_string(c) + " bypasses the private cell of " +
                             access.describe(l));
    } else if (auto mt = mutators.find(l); mt != mutators.end()) {
      got = finals[*mt->second.begin()][l];
    }
    const VersionState &want = ref.final_state(l);
    if (!(got == want))
      violate(-1, l, "final value of " + access.describe(l) + " is " +
                         describe_state(got) + ", expected " +
                         describe_state(want));
  }
  return rep;
}

std::vector<ParallelConflict> check_parallel_defs(const VisitTrace &trace,
                                                  const ComputationSpec &spec) {
  const AccessModel access(spec);
  std::map<std::vector<std::int64_t>, std::map<LocationId, std::int64_t>> groups;
  std::vector<ParallelConflict> out;
  for (const VisitRecord &r : trace.records) {
    if (!access.in_space(r.lattice_point))
      continue;
    std::vector<std::int64_t> key{r.copy};
    for (std::size_t i = 0; i < r.time_point.size(); ++i)
      if (i >= trace.convolved.size() || !trace.convolved[i])
        key.push_back(r.time_point[i]);
    auto &defs = groups[key];
    std::set<LocationId> own;
    for (int f = 0; f < access.formula_count(); ++f) {
      const LocationId w = access.write_location(f, r.lattice_point);
      if (!own.insert(w).second)
        continue;
      auto [it, fresh] = defs.emplace(w, r.seq);
      if (!fresh)
        out.push_back({it->second, r.seq, access.describe(w)});
    }
  }
  return out;
}

} // namespace clocksched
