#pragma once

#include "orientlab/core.hpp"
#include "orientlab/orient.hpp"

namespace orientlab::flipgame {

/// Pure function of a multiset of values.
using Aggregate = std::function<std::int64_t(const std::vector<std::int64_t>&)>;

Aggregate aggregate_sum();
Aggregate aggregate_min();
Aggregate aggregate_count_zero();  // "count free" under the matching encoding

enum class GameMode { Basic, Threshold };

/// Exact cost accounting: c = t + paid flips + outdegree charges. Flips made
/// during an op at their tail are free and tallied separately.
struct CostLedger {
  std::uint64_t t = 0;
  std::uint64_t f_cost = 0;
  std::uint64_t free_flips = 0;
  std::uint64_t outdeg_charges = 0;
  std::uint64_t resets = 0;

  std::uint64_t c() const { return t + f_cost + outdeg_charges; }
};

/// The flipping game over a value graph: every query or value update at v
/// charges outdegree(v), scans v's out-neighbors, and (Basic mode always,
/// Threshold mode only above delta_prime) flips all of v's outgoing edges.
/// Each vertex caches the current values of its in-neighbors.
class ValueGraph {
 public:
  ValueGraph(GameMode mode, std::uint32_t delta_prime = 0,
             InsertRule rule = InsertRule::ArbitraryFixed);

  /// Applies one op; queries return the aggregate at op.b (both endpoints are
  /// queried, left then right).
  std::optional<std::int64_t> game_op(const UpdateOp& op, const Aggregate& agg);

  std::int64_t query_vertex(VertexId v, const Aggregate& agg);
  void set_value(VertexId v, std::int64_t x);
  /// The charged scan + mode-dependent reset, as performed by any op at v.
  void reset_vertex(VertexId v);

  std::int64_t value(VertexId v) const;
  const OrientedGraph& graph() const { return g_; }
  const Metrics& metrics() const { return m_; }
  const CostLedger& ledger() const { return led_; }
  Recorder& recorder() { return rec_; }

  /// Throws InvariantError if any cached in-neighbor value is stale.
  void check_cache_coherence() const;

 private:
  void flips_at(VertexId v);
  void drop_edge_caches(VertexId a, VertexId b);

  GameMode mode_;
  std::uint32_t delta_prime_;
  InsertRule rule_;
  OrientedGraph g_;
  Metrics m_;
  Recorder rec_;
  CostLedger led_;
  std::map<VertexId, std::int64_t> value_;
  std::map<VertexId, std::map<VertexId, std::int64_t>> cached_in_;
  std::size_t op_index_ = 0;
};

/// BF viewed as a member of the same family, for use as the competitor A:
/// flips of edges outgoing of the currently-operated endpoints are free, all
/// other cascade flips cost 1; queries and value updates charge outdegree.
class BfMember {
 public:
  explicit BfMember(orient::OrientConfig cfg) : m_(orient::Algo::BF, cfg) {}

  void apply(const UpdateOp& op);
  void apply_all(const UpdateSequence& seq);

  const OrientedGraph& graph() const { return m_.graph(); }
  const Metrics& metrics() const { return m_.metrics(); }
  const CostLedger& ledger() const { return led_; }

 private:
  orient::Maintainer m_;
  CostLedger led_;
};

struct SimulationReport {
  Metrics metrics;
  std::uint64_t r = 0;  // simulated game resets (= BF cascade resets)
  std::uint64_t min_flips_per_reset = 0;
};

/// Drives the game by resetting exactly the vertices BF's cascade resets;
/// since a game reset flips the same out-edges, the game graph tracks BF's.
SimulationReport simulate_bf_via_resets(const UpdateSequence& seq, std::uint32_t delta);

}  // namespace orientlab::flipgame
