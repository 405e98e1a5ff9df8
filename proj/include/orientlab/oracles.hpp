#pragma once

#include <optional>
#include <utility>

#include "orientlab/core.hpp"

namespace orientlab::oracles {

/// Densest-subset witness for the Nash-Williams bound.
struct DensityCertificate {
  std::vector<VertexId> subset;
  std::size_t edges_inside = 0;
  // value = edges_inside / (|subset|-1), kept as the exact pair
  double value() const { return double(edges_inside) / double(subset.size() - 1); }
};

struct ArboricityResult {
  std::uint32_t alpha = 0;
  DensityCertificate witness;
};

/// Exact arboricity by exhaustive subset scan. Refuses graphs with more than
/// `max_n` live vertices (default 20).
ArboricityResult arboricity_bruteforce(const OrientedGraph& g, std::size_t max_n = 20);

struct MinMaxOutdegResult {
  std::uint32_t delta_star = 0;
  OrientedGraph orientation;  // witness with max outdegree exactly delta_star
};

/// Offline pseudoarboricity: binary search on the outdegree bound with a
/// max-flow feasibility check, deterministic augmenting order.
MinMaxOutdegResult min_max_outdegree(const OrientedGraph& g);

struct MatchingViolation {
  std::string reason;
  VertexId a = 0, b = 0;
};

/// Verifies matching ⊆ E, vertex-disjointness, and maximality.
std::optional<MatchingViolation> check_maximal_matching(
    const OrientedGraph& g, const std::vector<std::pair<VertexId, VertexId>>& matching);

struct ForestViolation {
  std::size_t forest = 0;
  VertexId a = 0, b = 0;  // an edge on a cycle in that class
};

/// Each color class must be acyclic (union-find test). `assignment` maps each
/// edge (given as an ordered pair matching the stored orientation) to a class.
std::optional<ForestViolation> check_forest_decomposition(
    const OrientedGraph& g,
    const std::vector<std::pair<std::pair<VertexId, VertexId>, std::size_t>>& assignment);

}  // namespace orientlab::oracles
