// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/enumerate.hpp>

#include <bit>
#include <map>
#include <memory>

namespace clocksched {

const ReverseMap *ScheduleTree::reverse_of(const std::string &index) const {
  for (const auto &rm : reverse_map)
    if (rm.index == index)
      return &rm;
  return nullptr;
}

namespace {

struct NodeTerm {
  std::size_t node;
  std::int64_t weight;
};

struct BoundCheck {
  std::vector<NodeTerm> terms;
  std::int64_t limit;
};

struct NodePlan {
  std::vector<std::size_t> bases;
  std::vector<BoundCheck> bounds;
};

// A nest resolved against its own node names.
struct NestPlan {
  std::vector<NodePlan> nodes;
  std::vector<std::vector<NodeTerm>> lattice; // per spec index; empty = digits
};

std::vector<NodeTerm> resolve_terms(const ReverseMap &rm,
                                const std::map<std::string, std::size_t> &pos) {
  std::vector<NodeTerm> out;
  for (const auto &t : rm.terms) {
    auto it = pos.find(t.node);
    if (it == pos.end())
      throw ScheduleError("reverse map of " + rm.index +
                          " references unknown node " + t.node);
    out.push_back({it->second, t.weight});
  }
  return out;
}

NestPlan plan_nest(const ScheduleTree &tree, const Nest &nest) {
  NestPlan plan;
  std::map<std::string, std::size_t> pos;
  for (std::size_t d = 0; d < nest.nodes.size(); ++d) {
    const EnumNode &n = nest.nodes[d];
    if (n.step <= 0 || n.extent < 0 || n.extent % n.step != 0)
      throw ScheduleError("node " + n.index + ": step " +
                          std::to_string(n.step) + " does not divide extent " +
                          std::to_string(n.extent));
    NodePlan np;
    for (const auto &b : n.lower.bases) {
      auto it = pos.find(b);
      if (it == pos.end())
        throw ScheduleError("bound of " + n.index +
                            " references unbound index " + b);
      np.bases.push_back(it->second);
    }
    if (!pos.emplace(n.index, d).second)
      throw ScheduleError("node " + n.index + " bound twice");
    plan.nodes.push_back(std::move(np));
  }
  for (std::size_t d = 0; d < nest.nodes.size(); ++d) {
    for (const Guard &g : nest.nodes[d].guards) {
      if (g.kind != Guard::Kind::Bound)
        continue;
      const ReverseMap *rm = tree.reverse_of(g.index);
      BoundCheck bc;
      if (rm) {
        bc.terms = resolve_terms(*rm, pos);
      } else {
        auto it = pos.find(g.index);
        if (it == pos.end())
          throw ScheduleError("guard references unknown index " + g.index);
        bc.terms.push_back({it->second, 1});
      }
      for (const NodeTerm &t : bc.terms)
        if (t.node > d)
          throw ScheduleError("guard on " + nest.nodes[d].index +
                              " depends on inner node " +
                              nest.nodes[t.node].index);
      bc.limit = g.limit;
      plan.nodes[d].bounds.push_back(std::move(bc));
    }
  }
  if (tree.spec) {
    for (const auto &decl : tree.spec->indexes) {
      const ReverseMap *rm = tree.reverse_of(decl.name);
      if (!rm)
        throw ScheduleError("no reverse map for index " + decl.name);
      plan.lattice.push_back(resolve_terms(*rm, pos));
    }
  }
  return plan;
}

std::int64_t max_time_value(const ScheduleTree &tree) {
  std::int64_t m = 0;
  for (const Nest &nest : tree.nests) {
    std::int64_t s = 0;
    for (const EnumNode &n : nest.nodes)
      if (n.extent > 0)
        s += n.lower.constant + n.extent - n.step;
    m = std::max(m, s);
  }
  return m;
}

} // namespace

VisitTrace trace_header(const ScheduleTree &tree) {
  VisitTrace t;
  if (!tree.nests.empty())
    for (const EnumNode &n : tree.nests.front().nodes) {
      t.coordinates.push_back(n.index);
      t.convolved.push_back(n.convolved);
    }
  t.color_k = static_cast<int>(
      std::bit_width(static_cast<std::uint64_t>(max_time_value(tree))));
  return t;
}

void for_each_visit(const ScheduleTree &tree,
                    const std::function<void(const VisitRecord &)> &fn) {
  const int k = trace_header(tree).color_k;
  std::unique_ptr<OrbitMap> orbit;
  if (tree.orbit_formula) {
    if (!tree.spec)
      throw ScheduleError("orbit grouping needs a computation spec");
    orbit = std::make_unique<OrbitMap>(*tree.spec, *tree.orbit_formula);
  }
  std::int64_t seq = 0;
  for (const Nest &nest : tree.nests) {
    const NestPlan plan = plan_nest(tree, nest);
    const std::size_t depth = nest.nodes.size();
    std::vector<std::int64_t> var(depth, 0), off(depth, 0), digit(depth, 0);

    auto value_of = [&](const std::vector<NodeTerm> &terms) {
      std::int64_t v = 0;
      for (const NodeTerm &t : terms)
        v += digit[t.node] * t.weight;
      return v;
    };

    auto emit_leaf = [&]() {
      VisitRecord r;
      r.copy = nest.copy;
      r.time_point = off;
      for (std::size_t d = 0; d < depth; ++d) {
        r.time_value += off[d];
        if (nest.nodes[d].convolved && off[d] != 0)
          ++r.level;
      }
      r.color = color_of(r.time_value, k);
      if (tree.spec) {
        for (const auto &terms : plan.lattice)
          r.lattice_point.push_back(value_of(terms));
      } else {
        r.lattice_point = digit;
      }
      if (!orbit) {
        r.seq = seq++;
        fn(r);
        return;
      }
      if (!orbit->is_representative(r.lattice_point))
        return;
      for (Point &member : orbit->orbit(r.lattice_point)) {
        r.lattice_point = std::move(member);
        r.seq = seq++;
        fn(r);
      }
    };

    if (depth == 0) {
      emit_leaf();
      continue;
    }
    // Iterative depth-first walk over the nest.
    std::vector<std::int64_t> lo(depth, 0);
    std::size_t d = 0;
    bool descending = true;
    for (;;) {
      const EnumNode &n = nest.nodes[d];
      if (descending) {
        std::int64_t base = 0;
        for (std::size_t b : plan.nodes[d].bases)
          base += var[b];
        lo[d] = base;
        var[d] = base + n.lower.constant;
      } else {
        var[d] += n.step;
      }
      const bool in_range = var[d] < lo[d] + n.lower.constant + n.extent;
      if (!in_range) {
        if (d == 0)
          break;
        --d;
        descending = false;
        continue;
      }
      off[d] = var[d] - lo[d];
      digit[d] = off[d] / n.step;
      bool pass = true;
      for (const BoundCheck &bc : plan.nodes[d].bounds)
        pass = pass && value_of(bc.terms) < bc.limit;
      if (!pass) {
        descending = false;
        continue;
      }
      if (d + 1 == depth) {
        emit_leaf();
        descending = false;
        continue;
      }
      ++d;
      descending = true;
    }
  }
}

VisitTrace enumerate(const ScheduleTree &tree) {
  VisitTrace t = trace_header(tree);
  for_each_visit(tree, [&](const VisitRecord &r) { t.records.push_back(r); });
  return t;
}

} // namespace clocksched
