// Copyright 2026 The zoomq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zoomq/rng.hpp"

namespace zoomq {

using NodeId = std::size_t;

namespace detail {

// Longest BFS distance from src, or -1 if some node is unreachable.
inline int eccentricity(const std::vector<std::vector<NodeId>>& adj, NodeId src) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<NodeId> frontier;
  dist[src] = 0;
  frontier.push(src);
  int far = 0;
  std::size_t seen = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        far = std::max(far, dist[v]);
        ++seen;
        frontier.push(v);
      }
    }
  }
  return seen == adj.size() ? far : -1;
}

inline bool reaches_all(const std::vector<std::vector<NodeId>>& adj, NodeId src) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<NodeId> stack{src};
  seen[src] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == adj.size();
}

inline std::vector<std::vector<NodeId>> transpose(const std::vector<std::vector<NodeId>>& adj) {
  std::vector<std::vector<NodeId>> t(adj.size());
  for (NodeId u = 0; u < adj.size(); ++u)
    for (NodeId v : adj[u]) t[v].push_back(u);
  return t;
}

}  // namespace detail

/// True iff every node reaches every other node. Forward and backward
/// reachability from node 0.
inline bool is_strongly_connected(const std::vector<std::vector<NodeId>>& out_adj) {
  if (out_adj.empty()) return false;
  return detail::reaches_all(out_adj, 0) && detail::reaches_all(detail::transpose(out_adj), 0);
}

/// Exact diameter by BFS from every node. Throws if not strongly connected.
inline int diameter(const std::vector<std::vector<NodeId>>& out_adj) {
  int d = 0;
  for (NodeId s = 0; s < out_adj.size(); ++s) {
    const int e = detail::eccentricity(out_adj, s);
    if (e < 0) throw std::invalid_argument("diameter: digraph is not strongly connected");
    d = std::max(d, e);
  }
  return d;
}

/// Static strongly connected digraph. Self-edges are never stored.
///
/// Adjacency lists are sorted, which fixes the order in which neighbors are
/// indexed by the consensus sampler.
class Digraph {
 public:
  /// Builds from explicit out-neighbor lists. Duplicate edges and
  /// self-edges are dropped. Throws std::invalid_argument if n < 2, an index is out of
  /// range, or the result is not strongly connected.
  explicit Digraph(std::vector<std::vector<NodeId>> out_adj) : out_(std::move(out_adj)) {
    if (out_.size() < 2) throw std::invalid_argument("Digraph: need at least 2 nodes");
    for (NodeId u = 0; u < out_.size(); ++u) {
      auto& list = out_[u];
      for (NodeId v : list)
        if (v >= out_.size()) throw std::invalid_argument("Digraph: node index out of range");
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      list.erase(std::remove(list.begin(), list.end(), u), list.end());
    }
    if (!is_strongly_connected(out_))
      throw std::invalid_argument("Digraph: not strongly connected");
    in_ = detail::transpose(out_);
    diameter_ = zoomq::diameter(out_);
  }

  static Digraph from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<std::vector<NodeId>> adj(n);
    for (auto [s, d] : edges) {
      if (s >= n || d >= n) throw std::invalid_argument("Digraph: edge endpoint out of range");
      adj[s].push_back(d);
    }
    return Digraph(std::move(adj));
  }

  std::size_t size() const { return out_.size(); }
  int diameter() const { return diameter_; }
  const std::vector<NodeId>& out_neighbors(NodeId v) const { return out_[v]; }
  const std::vector<NodeId>& in_neighbors(NodeId v) const { return in_[v]; }
  const std::vector<std::vector<NodeId>>& out_adjacency() const { return out_; }
  const std::vector<std::vector<NodeId>>& in_adjacency() const { return in_; }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& l : out_) m += l.size();
    return m;
  }

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.out_ == b.out_; }

 private:
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  int diameter_ = 0;
};

inline bool is_strongly_connected(const Digraph& g) { return is_strongly_connected(g.out_adjacency()); }
inline int diameter(const Digraph& g) { return g.diameter(); }

/// Random strongly connected digraph.
///
/// A directed Hamiltonian cycle over a seeded random permutation guarantees
/// strong connectivity; every other ordered pair (i, j), visited in
/// lexicographic order, is then added independently with probability edge_prob.
inline Digraph generate_random_digraph(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_random_digraph: n must be >= 2");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw std::invalid_argument("generate_random_digraph: edge_prob must lie in [0, 1]");
  Rng rng(seed);
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) has[perm[i]][perm[(i + 1) % n]] = 1;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && !has[i][j] && rng.bernoulli(edge_prob)) has[i][j] = 1;

  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (has[i][j]) adj[i].push_back(j);
  return Digraph(std::move(adj));
}

// Edge-list text format: first line n, then one "src dst" pair per line.

inline void write_edge_list(std::ostream& os, const Digraph& g) {
  os << g.size() << '\n';
  for (NodeId u = 0; u < g.size(); ++u)
    for (NodeId v : g.out_neighbors(u)) os << u << ' ' << v << '\n';
}

inline Digraph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (!have_n) {
      if (!(ls >> n)) throw std::invalid_argument("edge list: bad node count on line " + std::to_string(lineno));
      have_n = true;
      continue;
    }
    NodeId s = 0, d = 0;
    if (!(ls >> s >> d)) throw std::invalid_argument("edge list: bad edge on line " + std::to_string(lineno));
    edges.emplace_back(s, d);
  }
  if (!have_n) throw std::invalid_argument("edge list: empty input");
  return Digraph::from_edges(n, edges);
}

}  // namespace zoomq
