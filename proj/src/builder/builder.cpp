// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/builder.hpp>
#include <clocksched/enumerate.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace clocksched {

std::int64_t PaddedSpec::padded_points() const { return spec.point_count(); }

std::int64_t PaddedSpec::guarded_points() const {
  std::int64_t n = 1;
  for (auto d : declared)
    n *= d;
  return n;
}

PaddedSpec pad_and_guard(const ComputationSpec &spec) {
  PaddedSpec p;
  p.spec = spec;
  for (auto &decl : p.spec.indexes) {
    p.declared.push_back(decl.size);
    const std::int64_t padded = next_power_of_two(decl.size);
    if (padded != decl.size)
      p.guards.push_back({Guard::Kind::Bound, decl.name, decl.size});
    decl.size = padded;
  }
  return p;
}

namespace {

std::string clock_node_name(const std::string &prefix, std::size_t i) {
  static const char *const suffix[] = {"", "X", "Y", "Z", "U", "V", "W"};
  if (i < std::size(suffix))
    return prefix + suffix[i];
  return prefix + std::to_string(i);
}

std::string factor_prefix(std::size_t from_inner) {
  if (from_inner == 0)
    return "T";
  return std::string("T") + static_cast<char>('G' + from_inner - 1);
}

std::vector<EnumNode> clock_nodes(const Clock &clock,
                                  const std::string &prefix) {
  std::vector<EnumNode> nodes;
  for (std::size_t i = 0; i < clock.graduations.size(); ++i) {
    EnumNode n;
    n.index = clock_node_name(prefix, i);
    n.role = NodeRole::Clock;
    n.step = clock.graduations[i];
    n.extent = clock.graduations[i] * clock.rate;
    nodes.push_back(std::move(n));
  }
  return nodes;
}

void rename_node(Nest &nest, std::size_t d, const std::string &name) {
  const std::string old = nest.nodes[d].index;
  nest.nodes[d].index = name;
  for (auto &n : nest.nodes)
    for (auto &b : n.lower.bases)
      if (b == old)
        b = name;
}

void add_orbit_guard(ScheduleTree &tree) {
  tree.orbit_formula = cyclic_formula(*tree.spec);
  if (!tree.orbit_formula)
    return;
  for (auto &nest : tree.nests)
    if (!nest.nodes.empty())
      nest.nodes.back().guards.push_back({Guard::Kind::OrbitRep, "", 0});
}

} // namespace

ScheduleTree clock_skeleton(const Clock &clock) {
  ScheduleTree t;
  t.clock = clock;
  t.nests.push_back({0, clock_nodes(clock, "T")});
  return t;
}

ScheduleTree product_skeleton(const std::vector<Clock> &factors,
                              bool convolve_within) {
  if (factors.empty())
    throw ScheduleError("product of no clocks");
  ScheduleTree t;
  Nest nest;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    auto nodes = clock_nodes(factors[j], factor_prefix(factors.size() - 1 - j));
    if (!nest.nodes.empty())
      nodes.front().lower.bases = {nest.nodes.back().index};
    for (std::size_t i = 1; convolve_within && i < nodes.size(); ++i) {
      nodes[i].index += "N";
      nodes[i].lower.bases = {nodes[i - 1].index};
      nodes[i].convolved = true;
    }
    for (auto &n : nodes)
      nest.nodes.push_back(std::move(n));
  }
  t.nests.push_back(std::move(nest));
  return t;
}

ScheduleTree sequential_schedule(const ComputationSpec &spec,
                                 const std::vector<std::string> &order) {
  std::vector<std::string> names = order;
  if (names.empty())
    for (const auto &d : spec.indexes)
      names.push_back(d.name);
  std::set<std::string> distinct(names.begin(), names.end());
  if (names.size() != spec.indexes.size() || distinct.size() != names.size())
    throw ScheduleError("order must list every index exactly once");
  ScheduleTree t;
  t.spec = spec;
  Nest nest;
  for (const auto &name : names) {
    if (spec.index_position(name) < 0)
      throw ScheduleError("order names unknown index " + name);
    EnumNode n;
    n.index = name;
    n.extent = spec.size_of(name);
    nest.nodes.push_back(std::move(n));
  }
  t.nests.push_back(std::move(nest));
  for (const auto &d : spec.indexes)
    t.reverse_map.push_back({d.name, {{d.name, 1}}});
  add_orbit_guard(t);
  t.temp_plan = plan_temporaries(t);
  return t;
}

GradMapping parse_mapping(std::string_view text) {
  GradMapping m;
  auto number = [&](std::string_view s, std::string_view entry) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw Error("bad mapping entry '" + std::string(entry) + "'");
    return v;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view entry = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw Error("bad mapping entry '" + std::string(entry) + "'");
    GradAssignment a;
    a.index = std::string(entry.substr(0, eq));
    std::string_view value = entry.substr(eq + 1);
    if (const auto colon = value.find(':'); colon != std::string_view::npos) {
      a.size = number(value.substr(colon + 1), entry);
      if (a.size < 1)
        throw Error("bad mapping entry '" + std::string(entry) + "'");
      value = value.substr(0, colon);
    }
    a.graduation = number(value, entry);
    if (!is_power_of_two(a.graduation))
      throw Error("graduation of '" + a.index + "' is not a power of two");
    for (const auto &prev : m.assignments)
      if (prev.index == a.index)
        throw Error("index '" + a.index + "' mapped twice");
    m.assignments.push_back(std::move(a));
  }
  return m;
}

ScheduleTree map_indexes(const ComputationSpec &spec, const Clock &clock,
                         const GradMapping &mapping) {
  require_legal(spec);
  const PaddedSpec padded = pad_and_guard(spec);

  struct Entry {
    GradAssignment a;
    int decl = -1; // declaration position, -1 for synthetic
    std::size_t given = 0;
  };
  std::vector<Entry> entries;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < mapping.assignments.size(); ++i) {
    const GradAssignment &a = mapping.assignments[i];
    if (!seen.insert(a.index).second)
      throw ScheduleError("index " + a.index + " assigned twice");
    if (!is_power_of_two(a.graduation))
      throw ScheduleError("graduation " + std::to_string(a.graduation) +
                          " of " + a.index + " is not a power of two");
    if (!clock.graduations.empty() &&
        std::find(clock.graduations.begin(), clock.graduations.end(),
                  a.graduation) == clock.graduations.end())
      throw ScheduleError("graduation " + std::to_string(a.graduation) +
                          " of " + a.index + " is not in clock " +
                          clock.text());
    Entry e{a, spec.index_position(a.index), i};
    if (e.decl >= 0 && a.size != 0)
      throw ScheduleError("size given for spec index " + a.index);
    if (e.decl < 0 && e.a.size == 0)
      e.a.size = 2;
    if (e.decl < 0 && !is_power_of_two(e.a.size))
      throw ScheduleError("size of synthetic index " + a.index +
                          " is not a power of two");
    entries.push_back(std::move(e));
  }
  for (const auto &d : spec.indexes)
    if (!seen.count(d.name))
      throw ScheduleError("index " + d.name + " has no graduation");

  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry &x, const Entry &y) {
                     if (x.a.graduation != y.a.graduation)
                       return x.a.graduation > y.a.graduation;
                     const bool xs = x.decl >= 0, ys = y.decl >= 0;
                     if (xs != ys)
                       return xs;
                     return xs ? x.decl < y.decl : x.given < y.given;
                   });

  // Tiles of each spec index, outermost first.
  std::map<std::string, std::vector<std::size_t>> tiles;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].decl >= 0)
      continue;
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].decl < 0)
      ++j;
    if (j == entries.size())
      throw ScheduleError("synthetic index " + entries[i].a.index +
                          " has no spec index below it to tile");
    tiles[entries[j].a.index].push_back(i);
  }
  std::vector<std::int64_t> count(entries.size(), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry &e = entries[i];
    if (e.decl < 0) {
      count[i] = e.a.size;
      continue;
    }
    std::int64_t local =
        padded.spec.indexes[static_cast<std::size_t>(e.decl)].size;
    for (std::size_t t : tiles[e.a.index]) {
      if (local % entries[t].a.size != 0)
        throw ScheduleError("tiles of " + e.a.index +
                            " exceed its padded size");
      local /= entries[t].a.size;
    }
    count[i] = local;
  }

  ScheduleTree tree;
  tree.spec = spec;
  tree.clock = clock;
  tree.mapping.assignments = mapping.assignments;
  Nest nest;
  std::map<std::int64_t, std::string> rep;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry &e = entries[i];
    EnumNode n;
    n.index = e.a.index;
    n.role = e.decl >= 0 ? NodeRole::Lattice : NodeRole::Tile;
    n.step = e.a.graduation;
    n.extent = n.step * count[i];
    auto [it, fresh] = rep.emplace(n.step, n.index);
    if (fresh) {
      tree.mapping.representatives.emplace_back(n.step, n.index);
    } else {
      n.lower.bases = {it->second};
      n.convolved = true;
    }
    nest.nodes.push_back(std::move(n));
  }
  for (const Guard &g : padded.guards)
    for (auto &n : nest.nodes)
      if (n.index == g.index)
        n.guards.push_back(g);

  for (const auto &d : spec.indexes) {
    ReverseMap rm{d.name, {}};
    std::vector<DigitTerm> rev{{d.name, 1}};
    std::size_t self = 0;
    while (entries[self].a.index != d.name)
      ++self;
    std::int64_t weight = count[self];
    const auto &ts = tiles[d.name];
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
      rev.push_back({entries[*it].a.index, weight});
      weight *= count[*it];
    }
    rm.terms.assign(rev.rbegin(), rev.rend());
    tree.reverse_map.push_back(std::move(rm));
  }
  tree.nests.push_back(std::move(nest));
  add_orbit_guard(tree);
  tree.temp_plan = plan_temporaries(tree);
  return tree;
}

ScheduleTree apply_convolutions(ScheduleTree tree, int levels) {
  if (levels < 0)
    throw ScheduleError("negative convolution level");
  for (auto &nest : tree.nests) {
    if (levels > 0 && static_cast<std::size_t>(levels) + 1 > nest.nodes.size())
      throw ScheduleError("convolution level " + std::to_string(levels) +
                          " exceeds nest depth " +
                          std::to_string(nest.nodes.size()) + " - 1");
    for (std::size_t d = 1; d <= static_cast<std::size_t>(levels); ++d) {
      if (nest.nodes[d].role == NodeRole::Clock && !nest.nodes[d].convolved)
        rename_node(nest, d, nest.nodes[d].index + "N");
      nest.nodes[d].lower.bases = {nest.nodes[d - 1].index};
      nest.nodes[d].convolved = true;
    }
  }
  return tree;
}

ScheduleTree unfold(ScheduleTree tree, const std::string &index, int copies) {
  if (tree.nests.size() != 1)
    throw ScheduleError("tree is already unfolded");
  const Nest &nest = tree.nests.front();
  if (nest.nodes.empty() || nest.nodes.front().index != index)
    throw ScheduleError("index " + index +
                        " is not the outermost enumerated index");
  const EnumNode &root = nest.nodes.front();
  if (copies < 1 || !is_power_of_two(copies) || root.count() % copies != 0)
    throw ScheduleError(std::to_string(copies) + " copies do not divide the " +
                        std::to_string(root.count()) + " values of " + index);
  std::vector<Nest> out;
  const std::int64_t width = root.extent / copies;
  for (int c = 0; c < copies; ++c) {
    Nest n = nest;
    n.copy = c;
    n.nodes.front().extent = width;
    n.nodes.front().lower.constant += c * width;
    out.push_back(std::move(n));
  }
  tree.nests = std::move(out);
  tree.temp_plan = plan_temporaries(tree);
  return tree;
}

namespace {

// Points that share every unconvolved time coordinate run side by side, so
// none of them may define a location another one defines.
void require_parallel_safe(const ScheduleTree &tree) {
  const AccessModel access(*tree.spec);
  const VisitTrace header = trace_header(tree);
  std::map<std::vector<std::int64_t>, std::set<LocationId>> groups;
  for_each_visit(tree, [&](const VisitRecord &r) {
    std::vector<std::int64_t> key{r.copy};
    for (std::size_t i = 0; i < r.time_point.size(); ++i)
      if (i >= header.convolved.size() || !header.convolved[i])
        key.push_back(r.time_point[i]);
    auto &defs = groups[key];
    std::set<LocationId> own;
    for (int f = 0; f < access.formula_count(); ++f) {
      const LocationId w = access.write_location(f, r.lattice_point);
      if (own.insert(w).second && !defs.insert(w).second)
        throw ScheduleError("convolution makes parallel points define " +
                            access.describe(w) + " twice");
    }
  });
}

Clock clock_of_mapping(const GradMapping &mapping) {
  std::set<std::int64_t, std::greater<>> gs;
  for (const auto &a : mapping.assignments)
    gs.insert(a.graduation);
  return clock_from_graduations({gs.begin(), gs.end()}, 2);
}

} // namespace

ScheduleTree build_schedule(const ComputationSpec &spec,
                            const BuildOptions &options) {
  require_legal(spec);
  const int minimal = sequential_schedule(spec).temp_plan.locations;
  if (options.temp_budget && *options.temp_budget < minimal)
    throw BudgetError(*options.temp_budget, minimal);

  ScheduleTree t;
  if (!options.mapping.empty()) {
    const Clock clock =
        options.clock ? *options.clock : clock_of_mapping(options.mapping);
    t = map_indexes(spec, clock, options.mapping);
  } else {
    t = sequential_schedule(spec, options.order);
    if (options.clock)
      t.clock = options.clock;
  }
  if (options.convolutions > 0) {
    t = apply_convolutions(std::move(t), options.convolutions);
    require_parallel_safe(t);
  }

  if (options.unfold_index) {
    t = unfold(std::move(t), *options.unfold_index, options.unfold_copies);
  } else if (options.temp_budget && !t.nests.front().nodes.empty()) {
    const EnumNode &root = t.nests.front().nodes.front();
    // Widest power of two dividing the root's value count first.
    for (std::int64_t w = root.count() & -root.count(); w >= 2; w /= 2) {
      try {
        ScheduleTree u = unfold(t, root.index, static_cast<int>(w));
        if (u.temp_plan.locations <= *options.temp_budget) {
          t = std::move(u);
          break;
        }
      } catch (const ScheduleError &) {
      }
    }
  }
  if (options.temp_budget && t.temp_plan.locations > *options.temp_budget)
    throw BudgetError(*options.temp_budget, t.temp_plan.locations);
  t.temp_plan.minimal = minimal;
  return t;
}

} // namespace clocksched
