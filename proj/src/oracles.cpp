#include "orientlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>

namespace orientlab::oracles {

namespace {

std::vector<std::pair<VertexId, VertexId>> edge_list(const OrientedGraph& g) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v : g.live_vertices())
    for (VertexId w : g.out(v)) edges.emplace_back(v, w);
  return edges;
}

// Dinic with adjacency sorted by construction order; fully deterministic.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

  void add_edge(int u, int v, int cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = int(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0});
    head_[v] = int(edges_.size()) - 1;
  }

  int run(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      it_ = head_;
      while (int pushed = dfs(s, t, INT32_MAX)) flow += pushed;
    }
    return flow;
  }

  int edge_flow(int idx) const { return edges_[2 * idx ^ 1].cap; }  // residual of reverse

 private:
  struct E {
    int to, next, cap;
  };
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e = head_[v]; e != -1; e = edges_[e].next)
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[v] + 1;
          q.push(edges_[e].to);
        }
    }
    return level_[t] >= 0;
  }
  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int& e = it_[v]; e != -1; e = edges_[e].next) {
      auto& ed = edges_[e];
      if (ed.cap > 0 && level_[ed.to] == level_[v] + 1) {
        int d = dfs(ed.to, t, std::min(f, ed.cap));
        if (d > 0) {
          ed.cap -= d;
          edges_[e ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0;
  }
  std::vector<E> edges_;
  std::vector<int> head_, level_, it_;
};

}  // namespace

ArboricityResult arboricity_bruteforce(const OrientedGraph& g, std::size_t max_n) {
  auto verts = g.live_vertices();
  std::size_t n = verts.size();
  if (n > max_n)
    throw OpError("arboricity_bruteforce limited to " + std::to_string(max_n) +
                  " vertices, got " + std::to_string(n));
  ArboricityResult res;
  if (n < 2 || g.n_edges() == 0) {
    res.alpha = g.n_edges() > 0 ? 1 : 0;
    return res;
  }
  auto edges = edge_list(g);
  std::map<VertexId, int> pos;
  for (std::size_t i = 0; i < n; ++i) pos[verts[i]] = int(i);
  std::vector<std::pair<int, int>> eidx;
  eidx.reserve(edges.size());
  for (auto& [u, v] : edges) eidx.emplace_back(pos[u], pos[v]);

  std::uint32_t best_ceil = 0, best_inside = 0;
  std::uint64_t mask_best = 0;
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    std::uint32_t k = std::uint32_t(__builtin_popcountll(mask));
    if (k < 2) continue;
    std::uint32_t inside = 0;
    for (auto& [a, b] : eidx)
      if ((mask >> a & 1) && (mask >> b & 1)) ++inside;
    std::uint32_t c = (inside + k - 2) / (k - 1);  // ceil(inside/(k-1))
    if (c > best_ceil) {
      best_ceil = c;
      best_inside = inside;
      mask_best = mask;
    }
  }
  res.alpha = best_ceil;
  for (std::size_t i = 0; i < n; ++i)
    if (mask_best >> i & 1) res.witness.subset.push_back(verts[i]);
  res.witness.edges_inside = best_inside;
  return res;
}

MinMaxOutdegResult min_max_outdegree(const OrientedGraph& g) {
  auto verts = g.live_vertices();
  auto edges = edge_list(g);
  std::map<VertexId, int> pos;
  for (std::size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = int(i);

  auto feasible = [&](std::uint32_t delta, OrientedGraph* witness) {
    // nodes: 0 = source, 1..m = edges, m+1..m+n = vertices, m+n+1 = sink
    int m = int(edges.size()), n = int(verts.size());
    MaxFlow flow(m + n + 2);
    int s = 0, t = m + n + 1;
    for (int i = 0; i < m; ++i) {
      flow.add_edge(s, 1 + i, 1);
      flow.add_edge(1 + i, m + 1 + pos[edges[i].first], 1);
      flow.add_edge(1 + i, m + 1 + pos[edges[i].second], 1);
    }
    for (int i = 0; i < n; ++i) flow.add_edge(m + 1 + i, t, int(delta));
    if (flow.run(s, t) != m) return false;
    if (witness) {
      for (VertexId v : verts) witness->insert_vertex(v);
      for (int i = 0; i < m; ++i) {
        // edge i's unit went to whichever endpoint edge is saturated
        int first_arc = 3 * i + 1;  // arcs are added in triples per edge
        bool to_first = flow.edge_flow(first_arc) > 0;
        auto [u, v] = edges[i];
        if (to_first)
          witness->insert_directed(u, v);
        else
          witness->insert_directed(v, u);
      }
    }
    return true;
  };

  MinMaxOutdegResult res;
  if (edges.empty()) {
    for (VertexId v : verts) res.orientation.insert_vertex(v);
    return res;
  }
  std::uint32_t lo = 1, hi = 1;
  while (!feasible(hi, nullptr)) hi *= 2;
  while (lo < hi) {
    std::uint32_t mid = (lo + hi) / 2;
    if (feasible(mid, nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  res.delta_star = lo;
  feasible(lo, &res.orientation);
  return res;
}

std::optional<MatchingViolation> check_maximal_matching(
    const OrientedGraph& g, const std::vector<std::pair<VertexId, VertexId>>& matching) {
  std::set<VertexId> matched;
  for (auto& [u, v] : matching) {
    if (!g.alive(u) || !g.alive(v) || !g.has_edge(u, v))
      return MatchingViolation{"matched edge not in graph", u, v};
    if (!matched.insert(u).second) return MatchingViolation{"vertex matched twice", u, v};
    if (!matched.insert(v).second) return MatchingViolation{"vertex matched twice", v, u};
  }
  for (VertexId u : g.live_vertices()) {
    if (matched.count(u)) continue;
    for (VertexId v : g.out(u))
      if (!matched.count(v)) return MatchingViolation{"augmentable edge", u, v};
  }
  return std::nullopt;
}

std::optional<ForestViolation> check_forest_decomposition(
    const OrientedGraph& g,
    const std::vector<std::pair<std::pair<VertexId, VertexId>, std::size_t>>& assignment) {
  std::size_t covered = 0;
  std::map<std::size_t, std::vector<std::pair<VertexId, VertexId>>> classes;
  for (auto& [e, c] : assignment) {
    if (!g.oriented(e.first, e.second))
      return ForestViolation{c, e.first, e.second};  // not an edge of the orientation
    classes[c].push_back(e);
    ++covered;
  }
  if (covered != g.n_edges()) return ForestViolation{SIZE_MAX, 0, 0};  // not a full cover
  for (auto& [c, edges] : classes) {
    std::map<VertexId, VertexId> parent;
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
      auto it = parent.find(x);
      if (it == parent.end() || it->second == x) return x;
      return it->second = find(it->second);
    };
    for (auto& [u, v] : edges) {
      VertexId ru = find(u), rv = find(v);
      if (ru == rv) return ForestViolation{c, u, v};
      parent[ru] = rv;
      parent.try_emplace(u, ru);
      parent.try_emplace(v, rv);
    }
  }
  return std::nullopt;
}

}  // namespace orientlab::oracles
