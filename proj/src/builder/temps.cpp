// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Temp allocation by simulation. Each copy is replayed in trace order while
// tracking which version of every location main memory holds. A write that
// would destroy a version some later read of the same copy still expects
// first saves it to the lowest free cell; the cell is released after that
// version's last read. Reads across copies are only allowed for values no
// copy has modified yet (loaded into halo cells before the copies start),
// and a location several copies modify must be a pure accumulation target,
// which is then privatized per copy and summed afterwards.

#include <clocksched/builder.hpp>
#include <clocksched/enumerate.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace clocksched {

namespace {

using StateKey =
    std::tuple<LocationId, std::int64_t, std::vector<std::int64_t>>;

StateKey key_of(LocationId loc, const VersionState &s) {
  return {loc, s.writer, s.accums};
}

std::string point_text(const Point &p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

struct Access {
  const VisitRecord *record;
  std::int64_t point_key;
};

} // namespace

TempPlan plan_temporaries(const ScheduleTree &tree,
                          std::optional<std::int64_t> budget) {
  TempPlan plan;
  plan.unfold_width = std::max(tree.copies(), 1);
  if (!tree.spec)
    return plan;
  const ComputationSpec &spec = *tree.spec;
  const AccessModel access(spec);
  const ReferenceModel ref(access);
  const VisitTrace trace = enumerate(tree);
  const int nf = access.formula_count();

  // Exactly-once coverage is a precondition of everything below.
  std::vector<char> visited(static_cast<std::size_t>(spec.point_count()), 0);
  std::vector<std::vector<Access>> by_copy(
      static_cast<std::size_t>(plan.unfold_width));
  for (const VisitRecord &r : trace.records) {
    if (!access.in_space(r.lattice_point))
      throw ScheduleError("enumeration leaves the index space at " +
                          point_text(r.lattice_point));
    const std::int64_t pk = access.point_key(r.lattice_point);
    if (visited[static_cast<std::size_t>(pk)]++)
      throw ScheduleError("enumeration visits " + point_text(r.lattice_point) +
                          " twice");
    by_copy.at(static_cast<std::size_t>(r.copy)).push_back({&r, pk});
  }
  for (std::size_t pk = 0; pk < visited.size(); ++pk)
    if (!visited[pk])
      throw ScheduleError(
          "enumeration misses " +
          point_text(access.point_of(static_cast<std::int64_t>(pk))));

  // Who modifies and who reads each location.
  std::map<LocationId, std::set<int>> mutators;
  std::set<LocationId> assigned, read_anywhere;
  for (const VisitRecord &r : trace.records)
    for (int f = 0; f < nf; ++f) {
      const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
      for (int k = 0; k < static_cast<int>(fa.refs.size()); ++k)
        if (auto l = access.read_location(f, k, r.lattice_point); l != kOutside)
          read_anywhere.insert(l);
      const LocationId w = access.write_location(f, r.lattice_point);
      mutators[w].insert(r.copy);
      if (!fa.accumulate)
        assigned.insert(w);
    }
  auto sole_mutator = [&](LocationId l) {
    auto it = mutators.find(l);
    if (it == mutators.end() || it->second.size() != 1)
      return -1;
    return *it->second.begin();
  };

  std::map<std::pair<LocationId, int>, int> private_cell;
  for (const auto &[loc, copies] : mutators) {
    if (copies.size() < 2)
      continue;
    if (assigned.count(loc) || read_anywhere.count(loc))
      throw ScheduleError("not unfoldable: copies " +
                          std::to_string(*copies.begin()) + " and " +
                          std::to_string(*std::next(copies.begin())) +
                          " both modify " + access.describe(loc));
    for (int c : copies)
      private_cell[{loc, c}] = -1;
  }

  const VersionState initial;
  std::set<LocationId> halo_locations;
  std::vector<std::vector<TempSave>> copy_saves(by_copy.size());
  std::vector<std::vector<TempRead>> copy_reads(by_copy.size());
  std::vector<std::map<LocationId, VersionState>> finals(by_copy.size());

  for (std::size_t c = 0; c < by_copy.size(); ++c) {
    const int copy = static_cast<int>(c);
    auto is_halo = [&](LocationId l) {
      auto it = mutators.find(l);
      return it != mutators.end() && !it->second.count(copy);
    };
    // Reads of main-memory versions still to come, per (location, version).
    std::map<StateKey, std::int64_t> remaining;
    for (const Access &a : by_copy[c])
      for (int f = 0; f < nf; ++f) {
        const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
        for (int k = 0; k < static_cast<int>(fa.refs.size()); ++k) {
          const LocationId l = access.read_location(f, k, a.record->lattice_point);
          if (l == kOutside)
            continue;
          const VersionState &exp =
              *ref.expected(access.read_key(a.point_key, f, k));
          if (is_halo(l)) {
            if (!(exp == initial))
              throw ScheduleError(
                  "not unfoldable: copy " + std::to_string(copy) + " reads " +
                  access.describe(l) + " produced by copy " +
                  std::to_string(*mutators[l].begin()));
            halo_locations.insert(l);
            continue;
          }
          ++remaining[key_of(l, exp)];
        }
      }

    std::map<LocationId, VersionState> main;
    struct Cell {
      bool used = false;
      StateKey holds;
    };
    std::vector<Cell> cells;
    auto state_of = [&](LocationId l) -> const VersionState & {
      auto it = main.find(l);
      return it == main.end() ? initial : it->second;
    };

    for (const Access &a : by_copy[c]) {
      const Point &p = a.record->lattice_point;
      for (int f = 0; f < nf; ++f) {
        const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
        for (int k = 0; k < static_cast<int>(fa.refs.size()); ++k) {
          const LocationId l = access.read_location(f, k, p);
          if (l == kOutside || is_halo(l))
            continue;
          const std::int64_t rk = access.read_key(a.point_key, f, k);
          const VersionState &exp = *ref.expected(rk);
          const StateKey key = key_of(l, exp);
          const std::int64_t left = --remaining[key];
          if (state_of(l) == exp)
            continue;
          auto cell = std::find_if(cells.begin(), cells.end(), [&](const Cell &x) {
            return x.used && x.holds == key;
          });
          if (cell == cells.end())
            throw ScheduleError("dependence violated: read of " +
                                access.describe(l) + " at " + point_text(p) +
                                " expects " + describe_state(exp) +
                                " but memory holds " +
                                describe_state(state_of(l)));
          copy_reads[c].push_back({rk, static_cast<int>(cell - cells.begin())});
          if (left == 0)
            cell->used = false;
        }
        const LocationId w = access.write_location(f, p);
        const std::int64_t ev = access.event_key(a.point_key, f);
        if (private_cell.count({w, copy}))
          continue;
        const VersionState &cur = state_of(w);
        if (auto it = remaining.find(key_of(w, cur));
            it != remaining.end() && it->second > 0) {
          auto cell = std::find_if(cells.begin(), cells.end(),
                                   [](const Cell &x) { return !x.used; });
          if (cell == cells.end())
            cell = cells.insert(cells.end(), Cell{});
          cell->used = true;
          cell->holds = it->first;
          copy_saves[c].push_back(
              {ev, w, static_cast<int>(cell - cells.begin())});
        }
        VersionState next = cur;
        if (fa.accumulate)
          next.accumulate(ev);
        else
          next = VersionState{ev, {}};
        main[w] = std::move(next);
      }
    }
    plan.pool = std::max(plan.pool, static_cast<int>(cells.size()));
    finals[c] = std::move(main);
  }

  // Final versions must match the reference.
  for (LocationId l = 0; l < access.location_count(); ++l) {
    const VersionState &want = ref.final_state(l);
    VersionState got;
    auto it = mutators.find(l);
    if (it == mutators.end()) {
      got = initial;
    } else if (const int m = sole_mutator(l); m >= 0) {
      got = finals[static_cast<std::size_t>(m)].at(l);
    } else {
      for (const VisitRecord &r : trace.records)
        for (int f = 0; f < nf; ++f)
          if (access.write_location(f, r.lattice_point) == l)
            got.accumulate(access.event_key(access.point_key(r.lattice_point), f));
    }
    if (!(got == want))
      throw ScheduleError("output dependence violated on " + access.describe(l) +
                          ": final value from " + describe_state(got) +
                          ", expected " + describe_state(want));
  }

  // Lay the cells out: per-copy pools, then halo, then private cells.
  const int copies = plan.unfold_width;
  for (int c = 0; c < copies; ++c) {
    const int base = c * plan.pool;
    for (TempSave s : copy_saves[static_cast<std::size_t>(c)]) {
      s.cell += base;
      plan.saves.push_back(s);
    }
    for (TempRead r : copy_reads[static_cast<std::size_t>(c)]) {
      r.cell += base;
      plan.reads.push_back(r);
    }
  }
  int next = copies * plan.pool;
  std::map<LocationId, int> halo_cell;
  for (LocationId l : halo_locations) {
    halo_cell[l] = next;
    plan.halo.push_back({l, next++});
  }
  for (const VisitRecord &r : trace.records) {
    const std::int64_t pk = access.point_key(r.lattice_point);
    for (int f = 0; f < nf; ++f) {
      const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
      for (int k = 0; k < static_cast<int>(fa.refs.size()); ++k) {
        const LocationId l = access.read_location(f, k, r.lattice_point);
        if (l == kOutside)
          continue;
        auto it = mutators.find(l);
        if (it != mutators.end() && !it->second.count(r.copy))
          plan.reads.push_back({access.read_key(pk, f, k), halo_cell.at(l)});
      }
    }
  }
  for (auto &[key, cell] : private_cell) {
    cell = next++;
    plan.privatized.push_back({key.first, key.second, cell});
  }
  std::sort(plan.saves.begin(), plan.saves.end(),
            [](const TempSave &x, const TempSave &y) { return x.event < y.event; });
  std::sort(plan.reads.begin(), plan.reads.end(),
            [](const TempRead &x, const TempRead &y) { return x.read < y.read; });
  plan.locations = next;
  plan.minimal = plan.locations;
  if (budget && plan.locations > *budget)
    throw BudgetError(*budget, plan.locations);
  return plan;
}

TempPlan allocate_temporaries(const ComputationSpec &spec,
                              const DependencyGraph &deps,
                              std::int64_t budget) {
  if (budget < 0)
    throw ScheduleError("negative temporary budget");
  for (const DependencyEdge &e : deps.edges)
    for (auto d : e.displacement)
      if (d < 0)
        throw ScheduleError("negative displacement on " + e.array);
  const ScheduleTree seq = sequential_schedule(spec);
  const int minimal = seq.temp_plan.locations;
  if (budget < minimal)
    throw BudgetError(budget, minimal);
  TempPlan best = seq.temp_plan;
  // Widest first; the first width that fits is the achievable one.
  const EnumNode &root = seq.nests.front().nodes.front();
  for (std::int64_t w = root.count() & -root.count(); w >= 2; w /= 2) {
    try {
      const ScheduleTree u = unfold(seq, root.index, static_cast<int>(w));
      if (u.temp_plan.locations <= budget) {
        best = u.temp_plan;
        break;
      }
    } catch (const ScheduleError &) {
    }
  }
  best.minimal = minimal;
  return best;
}

} // namespace clocksched
