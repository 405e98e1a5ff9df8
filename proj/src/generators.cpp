#include "orientlab/generators.hpp"

#include <algorithm>
#include <numeric>

namespace orientlab::gen {

namespace {

// Union-find over a fixed vertex range.
struct Dsu {
  std::vector<VertexId> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  VertexId find(VertexId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

std::uint64_t edge_key(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t(u) << 32) | v;
}

}  // namespace

UpdateSequence gen_random(const RandomParams& p) {
  if (p.alpha < 1 || p.t < 1) throw OpError("gen_random requires alpha >= 1 and t >= 1");
  if (p.n < 2) throw OpError("gen_random requires n >= 2");
  Rng rng(p.seed);
  UpdateSequence seq;
  for (VertexId v = 0; v < p.n; ++v) seq.ops.push_back({OpKind::InsertVertex, v, 0, 0});

  // one forest per unit of arboricity; deletions mark a forest dirty and its
  // union-find is rebuilt lazily, on the first insertion it rejects
  struct Forest {
    Dsu dsu;
    std::vector<std::pair<VertexId, VertexId>> edges;
    bool dirty = false;
    explicit Forest(std::size_t n) : dsu(n) {}
  };
  std::vector<Forest> forests(p.alpha, Forest(p.n));

  struct LiveEdge {
    VertexId u, v;
    std::uint32_t forest;
  };
  std::vector<LiveEdge> live;
  std::map<std::uint64_t, std::size_t> live_idx;

  auto rebuild = [&](Forest& f) {
    f.dsu = Dsu(p.n);
    for (auto& [u, v] : f.edges) f.dsu.unite(u, v);
    f.dirty = false;
  };

  auto remove_live = [&](std::size_t i) {
    const LiveEdge e = live[i];
    auto& fe = forests[e.forest].edges;
    for (std::size_t k = 0; k < fe.size(); ++k)
      if (edge_key(fe[k].first, fe[k].second) == edge_key(e.u, e.v)) {
        fe[k] = fe.back();
        fe.pop_back();
        break;
      }
    forests[e.forest].dirty = true;
    live_idx.erase(edge_key(e.u, e.v));
    live[i] = live.back();
    live_idx[edge_key(live[i].u, live[i].v)] = i;
    live.pop_back();
  };

  auto emit_delete = [&]() {
    std::size_t i = rng.below(live.size());
    seq.ops.push_back({OpKind::DeleteEdge, live[i].u, live[i].v, 0});
    remove_live(i);
  };

  auto try_insert = [&]() {
    for (int attempt = 0; attempt < 64; ++attempt) {
      VertexId u = VertexId(rng.below(p.n));
      VertexId v = VertexId(rng.below(p.n));
      if (u == v || live_idx.count(edge_key(u, v))) continue;
      std::uint32_t fi = std::uint32_t(rng.below(p.alpha));
      Forest& f = forests[fi];
      if (f.dsu.find(u) == f.dsu.find(v)) {
        if (!f.dirty) continue;
        rebuild(f);
        if (f.dsu.find(u) == f.dsu.find(v)) continue;
      }
      f.dsu.unite(u, v);
      f.edges.emplace_back(u, v);
      live_idx[edge_key(u, v)] = live.size();
      live.push_back({u, v, fi});
      seq.ops.push_back({OpKind::InsertEdge, u, v, 0});
      return true;
    }
    return false;
  };

  for (std::uint64_t done = 0; done < p.t; ++done) {
    bool want_delete = !live.empty() && rng.chance(p.delete_fraction);
    if (want_delete) {
      emit_delete();
    } else if (!try_insert()) {
      // forests saturated; churn via a deletion so t stays honest
      if (live.empty()) break;
      emit_delete();
    }
    if (p.query_fraction > 0 && rng.chance(p.query_fraction)) {
      VertexId u = VertexId(rng.below(p.n));
      VertexId v = VertexId(rng.below(p.n));
      if (u != v) seq.ops.push_back({OpKind::AdjacencyQuery, u, v, 0});
    }
    if (p.value_fraction > 0 && rng.chance(p.value_fraction))
      seq.ops.push_back({OpKind::SetValue, VertexId(rng.below(p.n)), 0,
                         std::int64_t(rng.below(1000))});
  }
  return seq;
}

BlowupGadget gen_blowup_tree(std::uint32_t delta, std::uint32_t h) {
  if (delta < 2 || h < 2) throw OpError("gen_blowup_tree requires delta >= 2 and h >= 2");
  BlowupGadget g;
  // perfect delta-ary tree with internal levels 0..h-1; level h-1 holds the
  // delta^(h-1) leaf-parents
  std::vector<std::vector<VertexId>> levels(h + 1);
  VertexId next = 0;
  std::size_t width = 1;
  for (std::uint32_t d = 0; d < h; ++d) {
    for (std::size_t k = 0; k < width; ++k) levels[d].push_back(next++);
    width *= delta;
  }
  g.root = levels[0][0];
  g.vstar = next++;
  // leaves: delta-1 per leaf-parent
  for (std::size_t k = 0; k < levels[h - 1].size() * (delta - 1); ++k)
    levels[h].push_back(next++);
  VertexId trigger_peer = next++;
  g.n = next;

  for (VertexId v = 0; v < next; ++v) g.seq.ops.push_back({OpKind::InsertVertex, v, 0, 0});
  auto edge = [&](VertexId u, VertexId v) {
    g.seq.ops.push_back({OpKind::InsertEdgeDirected, u, v, 0});
  };
  for (std::uint32_t d = 0; d + 1 < h; ++d)
    for (std::size_t k = 0; k < levels[d].size(); ++k)
      for (std::uint32_t c = 0; c < delta; ++c)
        edge(levels[d][k], levels[d + 1][k * delta + c]);
  for (std::size_t k = 0; k < levels[h - 1].size(); ++k) {
    VertexId lp = levels[h - 1][k];
    for (std::uint32_t c = 0; c + 1 < delta; ++c)
      edge(lp, levels[h][k * (delta - 1) + c]);
    edge(lp, g.vstar);
  }
  edge(g.root, trigger_peer);  // raises the root to delta+1
  return g;
}

FarFlipGadget gen_farflip_chain(std::uint32_t n) {
  if (n < 8) throw OpError("gen_farflip_chain requires n >= 8");
  FarFlipGadget g;
  // two complete binary trees of height h, oriented toward the leaves
  std::uint32_t h = 0;
  while (2 * ((2u << (h + 1)) - 1) <= n) ++h;  // largest h with 2*(2^(h+1)-1) <= n
  g.tree_height = h;
  std::size_t tree_sz = (std::size_t(2) << h) - 1;
  g.u = 0;
  g.v = VertexId(tree_sz);
  g.n = 2 * tree_sz;
  for (VertexId v = 0; v < g.n; ++v) g.seq.ops.push_back({OpKind::InsertVertex, v, 0, 0});
  auto tree = [&](VertexId base) {
    for (std::size_t k = 0; 2 * k + 2 < tree_sz; ++k) {
      g.seq.ops.push_back({OpKind::InsertEdgeDirected, VertexId(base + k), VertexId(base + 2 * k + 1), 0});
      g.seq.ops.push_back({OpKind::InsertEdgeDirected, VertexId(base + k), VertexId(base + 2 * k + 2), 0});
    }
  };
  tree(g.u);
  tree(g.v);
  g.seq.ops.push_back({OpKind::InsertEdgeDirected, g.u, g.v, 0});
  return g;
}

GiGadget gen_gi(std::uint32_t i) {
  if (i < 2 || i > 20) throw OpError("gen_gi requires 2 <= i <= 20");
  GiGadget g;
  // id layout: cycles C_{i-1},...,C_2 outermost first, then the innermost
  // triangle, then a and b. Outer-first ids make the largest-first tie-break
  // (smallest id in the top bucket) walk each cycle in order.
  std::vector<std::pair<VertexId, std::uint32_t>> cyc;  // (base id, length) for C_{i-1}..C_2
  VertexId next = 0;
  for (std::uint32_t j = i - 1; j >= 2; --j) {
    cyc.emplace_back(next, 1u << j);
    next += 1u << j;
  }
  g.c1 = {next, next + 1, next + 2};
  next += 3;
  g.a = next++;
  g.b = next++;
  g.n_core = next;

  std::vector<std::pair<VertexId, VertexId>> edges;
  // innermost core: triangle plus its edges into the sinks
  edges.emplace_back(g.c1[0], g.c1[1]);
  edges.emplace_back(g.c1[1], g.c1[2]);
  edges.emplace_back(g.c1[2], g.c1[0]);
  edges.emplace_back(g.c1[0], g.a);
  edges.emplace_back(g.c1[1], g.b);
  edges.emplace_back(g.c1[2], g.a);
  // each C_j vertex points at a unique inner vertex; a is the one id skipped
  // (the cycle is one vertex short of the inner count)
  for (std::size_t c = cyc.size(); c-- > 0;) {
    auto [base, len] = cyc[c];
    std::vector<std::pair<VertexId, VertexId>> inner;
    for (std::uint32_t k = 0; k < len; ++k) {
      VertexId target = base + len + k;  // inner ids are contiguous after this block
      if (target >= g.a) ++target;       // skip a
      inner.emplace_back(VertexId(base + k), target);
    }
    std::vector<std::pair<VertexId, VertexId>> ring;
    for (std::uint32_t k = 0; k < len; ++k)
      ring.emplace_back(VertexId(base + k), VertexId(base + (k + 1) % len));
    // inner-to-outer build order: prepend this cycle's edges
    inner.insert(inner.end(), ring.begin(), ring.end());
    edges.insert(edges.end(), inner.begin(), inner.end());
  }

  for (VertexId v = 0; v < g.n_core; ++v) {
    g.seq.ops.push_back({OpKind::InsertVertex, v, 0, 0});
    g.target.insert_vertex(v);
  }
  for (auto& [u, v] : edges) {
    g.seq.ops.push_back({OpKind::InsertEdgeDirected, u, v, 0});
    g.target.insert_directed(u, v);
  }
  g.trigger_tail = cyc.empty() ? g.c1[0] : cyc[0].first;
  VertexId x = VertexId(g.n_core);
  g.seq.ops.push_back({OpKind::InsertVertex, x, 0, 0});
  g.seq.ops.push_back({OpKind::InsertEdgeDirected, g.trigger_tail, x, 0});
  return g;
}

GiAlphaGadget gen_gi_alpha(std::uint32_t i, std::uint32_t alpha) {
  if (i < 3 || i > 16) throw OpError("gen_gi_alpha requires 3 <= i <= 16");
  if (alpha < 1) throw OpError("gen_gi_alpha requires alpha >= 1");
  GiAlphaGadget g;
  g.alpha = alpha;

  // core = modified single-copy gadget: every cycle one longer, with a
  // special vertex s_j carrying no edge into the inner levels
  std::vector<std::size_t> inner_count(i);  // vertices of levels < j
  inner_count[2] = 5;                       // a, b, triangle
  for (std::uint32_t j = 3; j < i; ++j) inner_count[j] = 2 * inner_count[j - 1] + 1;

  struct Cyc {
    VertexId base;
    std::uint32_t len;
    VertexId special;
  };
  std::vector<Cyc> cyc;  // C_{i-1}..C_2, outermost first
  VertexId next = 0;
  for (std::uint32_t j = i - 1; j >= 2; --j) {
    std::uint32_t len = std::uint32_t(inner_count[j]) + 1;
    cyc.push_back({next, len, VertexId(next + len - 1)});
    next += len;
  }
  VertexId c1[3] = {next, next + 1, next + 2};
  next += 3;
  VertexId a = next++, b = next++;
  std::size_t n_core = next;

  std::vector<std::pair<VertexId, VertexId>> core_edges;
  core_edges.emplace_back(c1[0], c1[1]);
  core_edges.emplace_back(c1[1], c1[2]);
  core_edges.emplace_back(c1[2], c1[0]);
  core_edges.emplace_back(c1[0], a);
  core_edges.emplace_back(c1[1], b);
  core_edges.emplace_back(c1[2], a);
  for (std::size_t c = cyc.size(); c-- > 0;) {
    auto [base, len, special] = cyc[c];
    std::vector<std::pair<VertexId, VertexId>> block;
    for (std::uint32_t k = 0; k + 1 < len; ++k)  // non-special only; exact bijection
      block.emplace_back(VertexId(base + k), VertexId(base + len + k));
    for (std::uint32_t k = 0; k < len; ++k)
      block.emplace_back(VertexId(base + k), VertexId(base + (k + 1) % len));
    core_edges.insert(core_edges.end(), block.begin(), block.end());
  }

  // blowup: core vertex u becomes ids u*alpha .. u*alpha+alpha-1, every core
  // edge a directed biclique between the copy groups
  auto blown = [&](VertexId u, std::uint32_t copy) { return VertexId(u * alpha + copy); };
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (auto& [u, v] : core_edges)
    for (std::uint32_t p = 0; p < alpha; ++p)
      for (std::uint32_t q = 0; q < alpha; ++q) edges.emplace_back(blown(u, p), blown(v, q));

  next = VertexId(n_core * alpha);
  // s/t widget per level: clique on the s-group, fresh t-group with its own
  // clique, and s^p -> t^0..t^p so each s^p sends exactly alpha widget edges
  for (auto& c : cyc) {
    std::vector<VertexId> s(alpha), t(alpha);
    for (std::uint32_t p = 0; p < alpha; ++p) s[p] = blown(c.special, p);
    for (std::uint32_t p = 0; p < alpha; ++p) t[p] = next++;
    for (std::uint32_t p = 0; p < alpha; ++p)
      for (std::uint32_t q = p + 1; q < alpha; ++q) edges.emplace_back(s[p], s[q]);
    for (std::uint32_t p = 0; p < alpha; ++p)
      for (std::uint32_t l = 0; l <= p; ++l) edges.emplace_back(s[p], t[l]);
    for (std::uint32_t p = 0; p < alpha; ++p)
      for (std::uint32_t q = p + 1; q < alpha; ++q) edges.emplace_back(t[p], t[q]);
    g.s_groups.push_back(s);
  }
  g.n = next;

  for (VertexId v = 0; v < g.n; ++v) {
    g.seq.ops.push_back({OpKind::InsertVertex, v, 0, 0});
    g.target.insert_vertex(v);
  }
  for (auto& [u, v] : edges) {
    g.seq.ops.push_back({OpKind::InsertEdgeDirected, u, v, 0});
    g.target.insert_directed(u, v);
  }
  g.trigger_tail = blown(cyc[0].base, 0);
  VertexId x = VertexId(g.n);
  g.seq.ops.push_back({OpKind::InsertVertex, x, 0, 0});
  g.seq.ops.push_back({OpKind::InsertEdgeDirected, g.trigger_tail, x, 0});
  return g;
}

}  // namespace orientlab::gen
