#include "orientlab/orient.hpp"

#include <algorithm>
#include <deque>

namespace orientlab::orient {

// -------------------------------------------------------------- bucket heap

void BucketHeap::insert_or_update(VertexId v, std::uint32_t key) {
  auto it = key_.find(v);
  if (it != key_.end()) {
    if (it->second == key) return;
    buckets_[it->second].erase(v);
    it->second = key;
  } else {
    key_[v] = key;
    ++size_;
  }
  if (key >= buckets_.size()) buckets_.resize(key + 1);
  buckets_[key].insert(v);
  max_ = std::max(max_, key);
}

void BucketHeap::erase(VertexId v) {
  auto it = key_.find(v);
  if (it == key_.end()) return;
  buckets_[it->second].erase(v);
  key_.erase(it);
  --size_;
}

std::uint32_t BucketHeap::max_key() const {
  std::uint32_t m = max_;
  while (m > 0 && buckets_[m].empty()) --m;
  return m;
}

VertexId BucketHeap::extract_max() {
  while (max_ > 0 && buckets_[max_].empty()) --max_;
  if (buckets_.empty() || buckets_[max_].empty())
    throw InvariantError("extract_max on empty BucketHeap");
  VertexId v = *buckets_[max_].begin();  // ties: smallest VertexId
  buckets_[max_].erase(buckets_[max_].begin());
  key_.erase(v);
  --size_;
  return v;
}

// --------------------------------------------------------------- maintainer

Maintainer::Maintainer(Algo algo, OrientConfig cfg)
    : algo_(algo), cfg_(cfg), rec_(g_, m_) {
  if (cfg_.delta < 1) throw OpError("delta must be >= 1");
  if (algo_ == Algo::AntiReset && cfg_.delta < 5 * cfg_.alpha)
    throw OpError("anti-reset mode requires delta >= 5*alpha");
  rec_.enable_flip_distance(cfg_.track_flip_distance);
  rec_.enable_vertex_peaks(cfg_.track_vertex_peaks);
}

void Maintainer::watchdog() const {
  std::uint64_t n = std::max<std::uint64_t>(g_.n_live(), 1);
  if (m_.f > cfg_.watchdog_factor * (m_.t + 1) * n)
    throw InvariantError("cascade watchdog tripped at op " + std::to_string(op_index_) +
                         " (broken arboricity promise or bug)");
  if (cfg_.flip_budget && m_.f > cfg_.flip_budget)
    throw InvariantError("flip budget exhausted at op " + std::to_string(op_index_));
}

void Maintainer::reset(VertexId v) {
  rec_.note_reset(v, g_.outdeg(v));
  std::vector<VertexId> outs(g_.out(v).begin(), g_.out(v).end());
  for (VertexId h : outs) {
    rec_.flip(v, h);
    watchdog();
  }
}

void Maintainer::cascade_bf(VertexId start) {
  if (g_.outdeg(start) <= cfg_.delta) return;
  if (algo_ == Algo::BFLargest || cfg_.order == CascadeOrder::LargestFirst) {
    BucketHeap heap;
    heap.insert_or_update(start, g_.outdeg(start));
    while (!heap.empty()) {
      VertexId v = heap.extract_max();
      if (g_.outdeg(v) <= cfg_.delta) continue;
      std::vector<VertexId> outs(g_.out(v).begin(), g_.out(v).end());
      rec_.note_reset(v, g_.outdeg(v));
      for (VertexId h : outs) {
        rec_.flip(v, h);
        watchdog();
        if (g_.outdeg(h) > cfg_.delta) heap.insert_or_update(h, g_.outdeg(h));
      }
      heap.erase(v);
    }
    return;
  }
  std::deque<VertexId> q{start};
  std::set<VertexId> queued{start};
  while (!q.empty()) {
    VertexId v;
    if (cfg_.order == CascadeOrder::FIFO) {
      v = q.front();
      q.pop_front();
    } else {  // LIFO
      v = q.back();
      q.pop_back();
    }
    queued.erase(v);
    if (g_.outdeg(v) <= cfg_.delta) continue;
    std::vector<VertexId> outs(g_.out(v).begin(), g_.out(v).end());
    rec_.note_reset(v, g_.outdeg(v));
    for (VertexId h : outs) {
      rec_.flip(v, h);
      watchdog();
      if (g_.outdeg(h) > cfg_.delta && queued.insert(h).second) q.push_back(h);
    }
  }
}

void Maintainer::cascade_antireset(VertexId trigger) {
  if (g_.outdeg(trigger) <= cfg_.delta) return;
  const std::uint32_t two_alpha = 2 * cfg_.alpha;
  const std::uint32_t delta_p = cfg_.delta - two_alpha;

  // (1) directed exploration from the trigger; classification is frozen at
  // first visit, by the outdegree at that moment
  std::map<VertexId, bool> internal;  // visited -> is_internal
  std::vector<std::pair<VertexId, VertexId>> edges;  // E_u: out-edges of internals
  std::vector<VertexId> stack{trigger};
  internal[trigger] = true;  // trigger outdeg > delta >= delta_p
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (!internal[v]) continue;
    for (VertexId h : g_.out(v)) {
      edges.emplace_back(v, h);
      if (!internal.count(h)) {
        internal[h] = g_.outdeg(h) > delta_p;
        if (internal[h]) stack.push_back(h);
      }
    }
  }

  // (2) color all of G_u
  std::map<VertexId, std::vector<std::size_t>> adj;
  std::vector<bool> colored(edges.size(), true);
  std::vector<std::size_t> edge_flips(edges.size(), 0);
  std::map<VertexId, std::uint32_t> colored_deg;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].push_back(i);
    adj[edges[i].second].push_back(i);
    colored_deg[edges[i].first]++;
    colored_deg[edges[i].second]++;
  }

  CascadeAudit audit;
  audit.gu_edges = edges.size();
  for (auto& [v, is_int] : internal) (is_int ? audit.internal_vertices : audit.boundary_vertices)++;

  // (3) repeatedly anti-reset a vertex with at most 2*alpha adjacent colored
  // edges; smallest VertexId first
  std::set<VertexId> candidates;
  std::set<VertexId> processed;
  for (auto& [v, d] : colored_deg)
    if (d <= two_alpha) candidates.insert(v);
  std::size_t remaining = edges.size();
  while (remaining > 0) {
    if (candidates.empty())
      throw InvariantError(
          "anti-reset stalled with colored edges left; arboricity promise broken (op " +
          std::to_string(op_index_) + ")");
    VertexId v = *candidates.begin();
    candidates.erase(candidates.begin());
    processed.insert(v);
    rec_.note_reset(v, g_.outdeg(v));
    for (std::size_t ei : adj[v]) {
      if (!colored[ei]) continue;
      auto [a, b] = edges[ei];
      VertexId other = (a == v) ? b : a;
      if (g_.oriented(other, v)) {
        // incoming colored edge: flip it to be outgoing of v
        rec_.flip(other, v);
        watchdog();
        edge_flips[ei]++;
        audit.flips++;
      }
      colored[ei] = false;
      --remaining;
      for (VertexId e : {v, other}) {
        auto& d = colored_deg[e];
        --d;
        if (d <= two_alpha && !processed.count(e)) candidates.insert(e);
      }
    }
    candidates.erase(v);
    if (!internal[v])
      audit.boundary_peak_outdeg = std::max(audit.boundary_peak_outdeg, g_.outdeg(v));
  }

  for (auto& [v, is_int] : internal)
    if (is_int) audit.internal_final_max = std::max(audit.internal_final_max, g_.outdeg(v));
  audit.max_flips_per_edge =
      edges.empty() ? 0 : *std::max_element(edge_flips.begin(), edge_flips.end());
  if (keep_audits_) audits_.push_back(audit);
}

void Maintainer::apply(const UpdateOp& op) {
  std::size_t billed = apply_raw(g_, op, cfg_.rule, rec_, op_index_);
  m_.t += billed;
  rec_.begin_op(op);
  if (op.kind == OpKind::InsertEdge || op.kind == OpKind::InsertEdgeDirected) {
    // only the tail of the new edge can have gone over the threshold
    for (VertexId v : {op.a, op.b}) {
      if (g_.alive(v) && g_.outdeg(v) > cfg_.delta) {
        if (algo_ == Algo::AntiReset)
          cascade_antireset(v);
        else
          cascade_bf(v);
      }
    }
  }
  rec_.end_op();
  ++op_index_;
}

void Maintainer::apply_all(const UpdateSequence& seq) {
  for (const auto& op : seq.ops) apply(op);
}

Metrics run_sequence(Algo algo, const UpdateSequence& seq, OrientConfig cfg) {
  Maintainer m(algo, cfg);
  m.apply_all(seq);
  return m.metrics();
}

}  // namespace orientlab::orient
