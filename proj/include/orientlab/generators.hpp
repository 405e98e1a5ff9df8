#pragma once

#include "orientlab/core.hpp"

namespace orientlab::gen {

/// splitmix64; deterministic across platforms, unlike <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed + 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  bool chance(double p) { return double(next() >> 11) / double(1ull << 53) < p; }

 private:
  std::uint64_t s_;
};

struct RandomParams {
  std::uint32_t alpha = 1;
  std::uint32_t n = 64;
  std::uint64_t t = 256;  // number of edge updates to emit
  std::uint64_t seed = 1;
  double delete_fraction = 0.0;
  double query_fraction = 0.0;  // extra 'q' ops, relative to t
  double value_fraction = 0.0;  // extra 'val' ops, relative to t
};

/// Random arboricity-preserving workload: the graph is at all times a union
/// of `alpha` forests.
UpdateSequence gen_random(const RandomParams& p);

struct BlowupGadget {
  UpdateSequence seq;  // includes the final trigger insertion
  VertexId root = 0;
  VertexId vstar = 0;
  std::size_t n = 0;
};

/// Almost-perfect delta-ary tree oriented toward the leaves; each leaf-parent
/// has delta-1 children plus an edge to vstar. The last op raises the root's
/// outdegree to delta+1.
BlowupGadget gen_blowup_tree(std::uint32_t delta, std::uint32_t h);

struct FarFlipGadget {
  UpdateSequence seq;  // trigger edge (u,v) is the last op
  VertexId u = 0, v = 0;
  std::uint32_t tree_height = 0;
  std::size_t n = 0;
};

/// Two complete binary trees oriented toward their leaves with the trigger
/// edge joining the roots; restoring a 2-orientation needs flips at distance
/// proportional to the tree height.
FarFlipGadget gen_farflip_chain(std::uint32_t n);

struct GiGadget {
  UpdateSequence seq;  // includes trigger
  std::vector<VertexId> c1;  // vertices of the innermost cycle
  VertexId a = 0, b = 0;
  VertexId trigger_tail = 0;
  std::size_t n_core = 0;          // vertices before the trigger widget
  OrientedGraph target;            // pre-trigger orientation, built directly
};

/// Recursive cascade gadget: cycles C_{i-1},...,C_1 where each cycle vertex
/// also points at a unique vertex one level in. The innermost cycle is a
/// triangle (the source construction uses a 2-cycle, which a simple graph
/// cannot carry). All outdegrees are 2 except two sink vertices a and b.
GiGadget gen_gi(std::uint32_t i);

struct GiAlphaGadget {
  UpdateSequence seq;
  VertexId trigger_tail = 0;
  std::uint32_t alpha = 0;
  std::size_t n = 0;
  OrientedGraph target;
  std::vector<std::vector<VertexId>> s_groups;  // per level, the s^1..s^alpha ids
};

/// alpha-blown variant: cycles are one longer with a special vertex s_j per
/// level, every vertex becomes alpha copies, every edge a directed biclique,
/// and each s-group gets a clique plus a fresh t-group wired so that every
/// s^j sends exactly alpha edges into the s/t widget.
GiAlphaGadget gen_gi_alpha(std::uint32_t i, std::uint32_t alpha);

}  // namespace orientlab::gen
