#pragma once

#include "orientlab/core.hpp"

namespace orientlab::orient {

enum class CascadeOrder { FIFO, LIFO, LargestFirst };
enum class Algo { BF, BFLargest, AntiReset };

struct OrientConfig {
  std::uint32_t delta = 4;   // outdegree threshold
  std::uint32_t alpha = 1;   // arboricity promised by the adversary
  CascadeOrder order = CascadeOrder::FIFO;
  InsertRule rule = InsertRule::ArbitraryFixed;
  bool track_flip_distance = false;
  bool track_vertex_peaks = false;
  std::uint64_t watchdog_factor = 10;  // abort when f > factor * (t+1) * n
  // absolute flip cap, 0 = off; lets measurement runs stop adversarial
  // cascades that have no termination guarantee (delta below 2*alpha)
  std::uint64_t flip_budget = 0;
};

/// Vertices with outdegree above the threshold, bucketed by outdegree.
/// extract_max returns the smallest VertexId in the top bucket.
class BucketHeap {
 public:
  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  bool contains(VertexId v) const { return key_.count(v) > 0; }

  void insert_or_update(VertexId v, std::uint32_t key);
  void erase(VertexId v);
  VertexId extract_max();
  std::uint32_t max_key() const;

 private:
  std::vector<std::set<VertexId>> buckets_;
  std::map<VertexId, std::uint32_t> key_;
  std::uint32_t max_ = 0;
  std::size_t size_ = 0;
};

/// Per-trigger audit of one anti-reset cascade.
struct CascadeAudit {
  std::size_t gu_edges = 0;
  std::size_t internal_vertices = 0;
  std::size_t boundary_vertices = 0;
  std::size_t flips = 0;
  std::size_t max_flips_per_edge = 0;
  std::uint32_t boundary_peak_outdeg = 0;   // max outdegree seen at boundary vertices
  std::uint32_t internal_final_max = 0;     // max final outdegree over internal vertices
};

/// Orientation maintainer running one of the three algorithms over a stream
/// of updates.
class Maintainer {
 public:
  Maintainer(Algo algo, OrientConfig cfg);

  void apply(const UpdateOp& op);
  void apply_all(const UpdateSequence& seq);

  const OrientedGraph& graph() const { return g_; }
  const Metrics& metrics() const { return m_; }
  Recorder& recorder() { return rec_; }

  void keep_audits(bool on) { keep_audits_ = on; }
  const std::vector<CascadeAudit>& audits() const { return audits_; }

 private:
  void cascade_bf(VertexId start);
  void cascade_antireset(VertexId trigger);
  void reset(VertexId v);
  void watchdog() const;

  Algo algo_;
  OrientConfig cfg_;
  OrientedGraph g_;
  Metrics m_;
  Recorder rec_;
  std::size_t op_index_ = 0;
  bool keep_audits_ = false;
  std::vector<CascadeAudit> audits_;
};

Metrics run_sequence(Algo algo, const UpdateSequence& seq, OrientConfig cfg);

}  // namespace orientlab::orient
