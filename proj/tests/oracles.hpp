// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the tests. Nothing here calls the
// library under test; each oracle is the most direct way to get the answer.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<std::int64_t>>;

inline Grid matmul(const Grid &b, const Grid &c) {
  const std::size_t n = b.size(), m = c.front().size(), k = c.size();
  Grid a(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t x = 0; x < k; ++x)
        a[i][j] += b[i][x] * c[x][j];
  return a;
}

inline Grid transpose(const Grid &a) {
  Grid t(a.front().size(), std::vector<std::int64_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      t[j][i] = a[i][j];
  return t;
}

// One sweep of a(I,J) += a(I,J+1)+a(I+1,J)+a(I+1,J+1) in row-major order.
// Displacements are non-negative, so every read sees an untouched value:
// reading from a frozen copy is the snapshotting semantics. Off-grid is 0.
inline Grid stencil_sweep(const Grid &a) {
  const auto n = static_cast<std::int64_t>(a.size());
  const auto m = static_cast<std::int64_t>(a.front().size());
  auto at = [&](std::int64_t i, std::int64_t j) -> std::int64_t {
    return i < n && j < m ? a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] : 0;
  };
  Grid out = a;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < m; ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
          at(i, j + 1) + at(i + 1, j) + at(i + 1, j + 1);
  return out;
}

// All subset sums of the graduations.
inline std::set<std::int64_t> subset_sums(const std::vector<std::int64_t> &g) {
  std::set<std::int64_t> out;
  for (std::uint64_t mask = 0; mask < (1ULL << g.size()); ++mask) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (mask >> i & 1)
        s += g[i];
    out.insert(s);
  }
  return out;
}

// 2-adic valuation by repeated halving.
inline int valuation(std::int64_t v) {
  int c = 0;
  while (v % 2 == 0) {
    v /= 2;
    ++c;
  }
  return c;
}

// Recursive DFS from vertex 0, children in ascending order.
inline std::vector<std::int64_t>
dfs(std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>> &edges) {
  std::vector<std::vector<std::int64_t>> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges)
    adj[static_cast<std::size_t>(u)].push_back(v);
  for (auto &a : adj)
    std::sort(a.begin(), a.end());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::int64_t> order;
  std::function<void(std::int64_t)> go = [&](std::int64_t u) {
    seen[static_cast<std::size_t>(u)] = true;
    order.push_back(u);
    for (auto v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)])
        go(v);
  };
  go(0);
  return order;
}

// Cartesian product of [0,size) ranges in lexicographic order.
inline std::vector<std::vector<std::int64_t>>
cartesian(const std::vector<std::int64_t> &sizes) {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (auto s : sizes) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto &p : out)
      for (std::int64_t v = 0; v < s; ++v) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    out = next;
  }
  return out;
}

} // namespace oracle
