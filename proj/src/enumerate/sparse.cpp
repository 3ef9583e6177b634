// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/enumerate.hpp>

#include <algorithm>
#include <bit>
#include <sstream>

namespace clocksched {

SparseGraph SparseGraph::from_edges(
    std::vector<std::pair<std::int64_t, std::int64_t>> edges,
    std::int64_t vertex_count) {
  SparseGraph g;
  g.vertex_count = std::max<std::int64_t>(vertex_count, 1);
  for (const auto &[u, v] : edges) {
    if (u < 0 || v < 0)
      throw Error("negative vertex id in edge " + std::to_string(u) + " " +
                  std::to_string(v));
    g.vertex_count = std::max({g.vertex_count, u + 1, v + 1});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  return g;
}

SparseGraph SparseGraph::parse_edge_list(std::string_view text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::int64_t u = 0, v = 0;
    if (!(ls >> u)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      throw ParseError({lineno, 1}, "expected 'u v'");
    }
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw ParseError({lineno, 1}, "expected exactly two vertex ids");
    edges.emplace_back(u, v);
  }
  return from_edges(std::move(edges));
}

std::vector<std::vector<std::int64_t>> SparseGraph::adjacency() const {
  std::vector<std::vector<std::int64_t>> adj(
      static_cast<std::size_t>(vertex_count));
  for (const auto &[u, v] : edges)
    adj[static_cast<std::size_t>(u)].push_back(v);
  return adj;
}

std::vector<std::int64_t> discovery_order(const SparseGraph &graph,
                                          SparseOrder order) {
  const auto adj = graph.adjacency();
  const std::size_t n = adj.size();
  // Cycle check first, independent of the requested order.
  enum : char { White, Grey, Black };
  std::vector<char> mark(n, White);
  std::vector<std::int64_t> dfs;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  mark[0] = Grey;
  dfs.push_back(0);
  while (!stack.empty()) {
    auto &[v, next] = stack.back();
    if (next == adj[v].size()) {
      mark[v] = Black;
      stack.pop_back();
      continue;
    }
    const auto w = static_cast<std::size_t>(adj[v][next++]);
    if (mark[w] == Grey)
      throw Error("cycle: back edge " + std::to_string(v) + "->" +
                  std::to_string(w));
    if (mark[w] == White) {
      mark[w] = Grey;
      dfs.push_back(static_cast<std::int64_t>(w));
      stack.emplace_back(w, 0);
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (mark[v] == White)
      throw Error("vertex " + std::to_string(v) +
                  " is unreachable from origin 0");
  if (order == SparseOrder::DepthFirst)
    return dfs;

  std::vector<std::int64_t> bfs{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t i = 0; i < bfs.size(); ++i)
    for (auto w : adj[static_cast<std::size_t>(bfs[i])])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        bfs.push_back(w);
      }
  return bfs;
}

VisitTrace enumerate_sparse(const SparseGraph &graph, const Clock &unit,
                            SparseOrder order) {
  const auto slots = clock_points(unit);
  const auto tuples = clock_tuples(unit);
  const auto vertexes = discovery_order(graph, order);
  const auto n = static_cast<std::int64_t>(slots.size());
  const std::int64_t span = unit.span();

  VisitTrace t;
  t.coordinates.push_back("U");
  t.convolved.push_back(false);
  for (std::size_t i = 0; i < unit.graduations.size(); ++i) {
    t.coordinates.push_back("G" + std::to_string(unit.graduations[i]));
    t.convolved.push_back(i > 0);
  }
  const std::int64_t units =
      (static_cast<std::int64_t>(vertexes.size()) + n - 1) / n;
  t.color_k = static_cast<int>(std::bit_width(
      static_cast<std::uint64_t>(std::max<std::int64_t>(units * span - 1, 0))));
  t.empty_slots = units * n - static_cast<std::int64_t>(vertexes.size());

  for (std::int64_t i = 0; i < static_cast<std::int64_t>(vertexes.size()); ++i) {
    const std::int64_t u = i / n, s = i % n;
    VisitRecord r;
    r.seq = i;
    r.time_point.push_back(u * span);
    for (auto x : tuples[static_cast<std::size_t>(s)])
      r.time_point.push_back(x);
    r.time_value = u * span + slots[static_cast<std::size_t>(s)];
    r.lattice_point = {vertexes[static_cast<std::size_t>(i)]};
    r.color = color_of(r.time_value, t.color_k);
    for (std::size_t c = 2; c < r.time_point.size(); ++c)
      r.level += r.time_point[c] != 0;
    t.records.push_back(std::move(r));
  }
  return t;
}

} // namespace clocksched
