#include "doctest.h"
#include "helpers.hpp"
#include "orientlab/generators.hpp"
#include "orientlab/oracles.hpp"
#include "orientlab/orient.hpp"

using namespace orientlab;

namespace {

OrientedGraph replay(const UpdateSequence& seq, std::size_t drop_tail = 0) {
  OrientedGraph g;
  Metrics m;
  Recorder rec(g, m);
  for (std::size_t i = 0; i + drop_tail < seq.ops.size(); ++i)
    apply_raw(g, seq.ops[i], InsertRule::Directive, rec, i);
  return g;
}

std::size_t count_kind(const UpdateSequence& seq, OpKind k) {
  std::size_t c = 0;
  for (const auto& op : seq.ops) c += op.kind == k;
  return c;
}

}  // namespace

TEST_CASE("random workload with alpha=1 stays a forest") {
  auto seq = test::random_seq(1, 12, 40, 5);
  OrientedGraph g;
  Metrics m;
  Recorder rec(g, m);
  for (std::size_t i = 0; i < seq.ops.size(); ++i) {
    apply_raw(g, seq.ops[i], InsertRule::ArbitraryFixed, rec, i);
    if (g.n_live() >= 2 && g.n_edges() > 0)
      CHECK(oracles::arboricity_bruteforce(g).alpha == 1);
  }
}

TEST_CASE("random workload respects the promised arboricity") {
  auto seq = test::random_seq(2, 14, 60, 7, 0.25);
  OrientedGraph g;
  Metrics m;
  Recorder rec(g, m);
  for (std::size_t i = 0; i < seq.ops.size(); ++i) {
    apply_raw(g, seq.ops[i], InsertRule::ArbitraryFixed, rec, i);
    if (i % 10 == 0 && g.n_live() >= 2)
      CHECK(oracles::arboricity_bruteforce(g).alpha <= 2);
  }
}

TEST_CASE("random workload bookkeeping: edges = inserted - deleted") {
  auto seq = test::random_seq(2, 40, 400, 9, 0.5);
  auto g = replay(seq);
  std::size_t ins = count_kind(seq, OpKind::InsertEdge) + count_kind(seq, OpKind::InsertEdgeDirected);
  std::size_t del = count_kind(seq, OpKind::DeleteEdge);
  CHECK(g.n_edges() == ins - del);
  CHECK(del > 0);
}

TEST_CASE("random workload can interleave queries and value updates") {
  auto seq = test::random_seq(1, 20, 100, 3, 0.0, 0.3, 0.2);
  CHECK(count_kind(seq, OpKind::AdjacencyQuery) > 0);
  CHECK(count_kind(seq, OpKind::SetValue) > 0);
  replay(seq);  // all ops valid
}

TEST_CASE("blowup tree, small instance") {
  auto gadget = gen::gen_blowup_tree(2, 2);
  auto pre = replay(gadget.seq, 1);  // without the trigger
  CHECK(oracles::arboricity_bruteforce(pre).alpha == 2);

  orient::OrientConfig cfg;
  cfg.delta = 2;
  cfg.order = orient::CascadeOrder::FIFO;
  cfg.rule = InsertRule::Directive;
  cfg.track_vertex_peaks = true;
  orient::Maintainer m(orient::Algo::BF, cfg);
  m.apply_all(gadget.seq);
  // both leaf-parents reset into vstar: peak there is delta^(h-1) = 2
  CHECK(m.recorder().vertex_peak(gadget.vstar) == 2);
  CHECK(m.metrics().peak_outdeg <= 2 + 1);
}

TEST_CASE("blowup tree sizes scale as a delta-ary tree") {
  auto gadget = gen::gen_blowup_tree(3, 3);
  auto pre = replay(gadget.seq, 1);
  // internal tree (13) + leaves (2 per leaf-parent, 18) + vstar + trigger peer
  CHECK(gadget.n == pre.n_live());
  CHECK(pre.outdeg(gadget.root) == 3);
  CHECK(pre.outdeg(gadget.vstar) == 0);
  std::size_t leaf_parents = 0;
  for (VertexId v : pre.live_vertices())
    if (pre.oriented(v, gadget.vstar)) ++leaf_parents;
  CHECK(leaf_parents == 9);  // delta^(h-1)
}

TEST_CASE("recursive cascade gadget structure") {
  auto g2 = gen::gen_gi(2);
  CHECK(g2.c1.size() == 3);  // innermost cycle is a triangle in a simple graph
  for (VertexId v : g2.target.live_vertices()) {
    std::uint32_t expect = (v == g2.a || v == g2.b) ? 0 : 2;
    CHECK(g2.target.outdeg(v) == expect);
  }

  auto g4 = gen::gen_gi(4);
  CHECK(g4.n_core == (1u << 4) + 1);  // 2^i plus the triangle's extra vertex
  auto pre = replay(g4.seq, 1);
  // the insertion order reproduces the target orientation edge-by-edge
  for (VertexId v : g4.target.live_vertices())
    for (VertexId w : g4.target.out(v)) CHECK(pre.oriented(v, w));
  CHECK(pre.n_edges() >= g4.target.n_edges());
}

TEST_CASE("recursive cascade gadget prefixes stay sparse") {
  auto g3 = gen::gen_gi(3);
  OrientedGraph g;
  Metrics m;
  Recorder rec(g, m);
  for (std::size_t i = 0; i + 1 < g3.seq.ops.size(); ++i) {
    apply_raw(g, g3.seq.ops[i], InsertRule::Directive, rec, i);
    if (g.n_live() >= 2 && i % 4 == 0)
      CHECK(oracles::arboricity_bruteforce(g).alpha <= 2);
  }
}

TEST_CASE("blown-up cascade gadget replays onto its target orientation") {
  auto ga = gen::gen_gi_alpha(3, 2);
  CHECK(ga.alpha == 2);
  auto pre = replay(ga.seq, 1);
  for (VertexId v : ga.target.live_vertices())
    for (VertexId w : ga.target.out(v)) CHECK(pre.oriented(v, w));
  // every special vertex sends exactly alpha edges into its s/t widget group
  for (auto& group : ga.s_groups)
    for (VertexId s : group) CHECK(pre.outdeg(s) >= ga.alpha);
}

TEST_CASE("far-flip chain smoke") {
  auto gadget = gen::gen_farflip_chain(64);
  auto pre = replay(gadget.seq, 1);
  CHECK(oracles::min_max_outdegree(pre).delta_star <= 2);
  CHECK(gadget.tree_height >= 2);

  orient::OrientConfig cfg;
  cfg.delta = 2;
  cfg.rule = InsertRule::Directive;
  cfg.track_flip_distance = true;
  orient::Maintainer m(orient::Algo::BF, cfg);
  m.apply_all(gadget.seq);
  CHECK(m.metrics().f >= 6);  // log2(64)
  std::uint32_t maxd = 0;
  for (auto& [d, c] : m.metrics().flip_distance_hist) maxd = std::max(maxd, d);
  CHECK(maxd >= 3);  // half of log2 n
}

TEST_CASE("generated sequences are deterministic in the seed") {
  auto a = test::random_seq(2, 30, 200, 77, 0.3, 0.1, 0.1);
  auto b = test::random_seq(2, 30, 200, 77, 0.3, 0.1, 0.1);
  CHECK(a.to_text() == b.to_text());
  auto c = test::random_seq(2, 30, 200, 78, 0.3, 0.1, 0.1);
  CHECK(a.to_text() != c.to_text());
}
