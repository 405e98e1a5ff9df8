#pragma once

#include <string>

#include "orientlab/core.hpp"
#include "orientlab/generators.hpp"

namespace orientlab::test {

// Builds a graph from `ied`-style directed insertions.
inline OrientedGraph make_graph(std::size_t n,
                                const std::vector<std::pair<VertexId, VertexId>>& edges) {
  OrientedGraph g;
  for (VertexId v = 0; v < n; ++v) g.insert_vertex(v);
  for (auto& [u, v] : edges) g.insert_directed(u, v);
  return g;
}

inline UpdateSequence seq_from_graph(std::size_t n,
                                     const std::vector<std::pair<VertexId, VertexId>>& edges) {
  UpdateSequence s;
  for (VertexId v = 0; v < n; ++v) s.ops.push_back({OpKind::InsertVertex, v, 0, 0});
  for (auto& [u, v] : edges) s.ops.push_back({OpKind::InsertEdgeDirected, u, v, 0});
  return s;
}

inline OrientedGraph complete_graph(std::size_t n) {
  OrientedGraph g;
  for (VertexId v = 0; v < n; ++v) g.insert_vertex(v);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) g.insert_directed(u, v);
  return g;
}

inline UpdateSequence random_seq(std::uint32_t alpha, std::uint32_t n, std::uint64_t t,
                                 std::uint64_t seed, double del = 0.0, double query = 0.0,
                                 double value = 0.0) {
  gen::RandomParams p;
  p.alpha = alpha;
  p.n = n;
  p.t = t;
  p.seed = seed;
  p.delete_fraction = del;
  p.query_fraction = query;
  p.value_fraction = value;
  return gen::gen_random(p);
}

}  // namespace orientlab::test
