#include "orientlab/apps.hpp"

#include <algorithm>

namespace orientlab::apps {

// ----------------------------------------------------------------- matching

namespace {

orient::OrientConfig engine_config(const MatchConfig& cfg) {
  orient::OrientConfig oc;
  // the FlipGame engine never cascades; orientation changes only via scan resets
  oc.delta = cfg.engine == MatchEngine::Orientation ? cfg.delta : UINT32_MAX / 2;
  oc.rule = cfg.rule;
  return oc;
}

}  // namespace

MatchingMaintainer::MatchingMaintainer(MatchConfig cfg)
    : cfg_(cfg), m_(orient::Algo::BF, engine_config(cfg)) {
  m_.recorder().on_flip = [this](VertexId u, VertexId v) {
    // edge u->v just became v->u
    free_in_[v].erase(u);
    if (is_free(v)) free_in_[u].insert(v);
    ++work_;
  };
}

bool MatchingMaintainer::is_free(VertexId v) const {
  return m_.graph().alive(v) && !partner_.count(v);
}

std::optional<VertexId> MatchingMaintainer::partner(VertexId v) const {
  auto it = partner_.find(v);
  if (it == partner_.end()) return std::nullopt;
  return it->second;
}

const std::set<VertexId>& MatchingMaintainer::free_in(VertexId v) const {
  static const std::set<VertexId> empty;
  auto it = free_in_.find(v);
  return it == free_in_.end() ? empty : it->second;
}

std::vector<std::pair<VertexId, VertexId>> MatchingMaintainer::matching() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (auto& [u, v] : partner_)
    if (u < v) out.emplace_back(u, v);
  return out;
}

void MatchingMaintainer::scan_reset(VertexId x) {
  if (cfg_.engine != MatchEngine::FlipGame) return;
  if (m_.graph().outdeg(x) <= cfg_.threshold) return;
  std::vector<VertexId> outs(m_.graph().out(x).begin(), m_.graph().out(x).end());
  for (VertexId w : outs) m_.recorder().flip(x, w);
}

void MatchingMaintainer::notify(VertexId x) {
  bool f = is_free(x);
  work_ += m_.graph().outdeg(x);
  for (VertexId w : m_.graph().out(x)) {
    if (f)
      free_in_[w].insert(x);
    else
      free_in_[w].erase(x);
  }
  scan_reset(x);
}

void MatchingMaintainer::match(VertexId x, VertexId y) {
  partner_[x] = y;
  partner_[y] = x;
  notify(x);
  notify(y);
}

void MatchingMaintainer::rematch(VertexId x) {
  if (!is_free(x)) return;
  std::optional<VertexId> y;
  const auto& fi = free_in(x);
  if (!fi.empty()) {
    y = *fi.begin();
  } else {
    work_ += m_.graph().outdeg(x);
    for (VertexId w : m_.graph().out(x))
      if (is_free(w)) {
        y = w;
        break;
      }
    scan_reset(x);
  }
  if (y) match(x, *y);
}

void MatchingMaintainer::fix_edge_entry(VertexId u, VertexId v) {
  free_in_[u].erase(v);
  free_in_[v].erase(u);
  const auto& g = m_.graph();
  if (!g.alive(u) || !g.alive(v)) return;
  if (g.oriented(u, v)) {
    if (is_free(u)) free_in_[v].insert(u);
  } else if (g.oriented(v, u)) {
    if (is_free(v)) free_in_[u].insert(v);
  }
}

void MatchingMaintainer::apply(const UpdateOp& op) {
  switch (op.kind) {
    case OpKind::InsertEdge:
    case OpKind::InsertEdgeDirected:
      m_.apply(op);
      fix_edge_entry(op.a, op.b);
      if (is_free(op.a) && is_free(op.b)) match(op.a, op.b);
      break;
    case OpKind::DeleteEdge: {
      bool were_matched = partner(op.a) == std::optional<VertexId>(op.b);
      free_in_[op.a].erase(op.b);
      free_in_[op.b].erase(op.a);
      m_.apply(op);
      if (were_matched) {
        partner_.erase(op.a);
        partner_.erase(op.b);
        notify(op.a);
        notify(op.b);
        rematch(op.a);
        rematch(op.b);
      }
      break;
    }
    case OpKind::DeleteVertex: {
      VertexId x = op.a;
      if (!m_.graph().alive(x)) throw OpError("dead or unknown vertex " + std::to_string(x));
      for (VertexId w : m_.graph().neighbors(x)) free_in_[w].erase(x);
      free_in_.erase(x);
      std::optional<VertexId> y = partner(x);
      if (y) {
        partner_.erase(x);
        partner_.erase(*y);
      }
      m_.apply(op);
      if (y) {
        notify(*y);
        rematch(*y);
      }
      break;
    }
    default:
      m_.apply(op);
      break;
  }
}

void MatchingMaintainer::apply_all(const UpdateSequence& seq) {
  for (const auto& op : seq.ops) apply(op);
}

void MatchingMaintainer::check_free_in_coherence() const {
  const auto& g = m_.graph();
  for (VertexId v : g.live_vertices()) {
    std::set<VertexId> expect;
    for (VertexId u : g.in(v))
      if (is_free(u)) expect.insert(u);
    if (expect != free_in(v))
      throw InvariantError("free-in set out of sync at vertex " + std::to_string(v));
  }
}

// --------------------------------------------------------------- adjacency

AdjStruct::AdjStruct(std::uint32_t delta_prime, InsertRule rule)
    : delta_prime_(delta_prime), rule_(rule), rec_(g_, m_) {
  if (delta_prime_ < 1) throw OpError("delta_prime must be >= 1");
  rec_.enable_flip_distance(true);
  rec_.on_flip = [this](VertexId u, VertexId v) {
    refresh(u);
    refresh(v);
  };
}

void AdjStruct::refresh(VertexId v) {
  if (g_.alive(v) && g_.outdeg(v) < 2 * delta_prime_)
    index_[v].assign(g_.out(v).begin(), g_.out(v).end());
  else
    index_.erase(v);
}

void AdjStruct::apply(const UpdateOp& op) {
  rec_.begin_op(op);
  std::vector<VertexId> touched;
  if (op.kind == OpKind::DeleteVertex && g_.alive(op.a)) touched = g_.neighbors(op.a);
  m_.t += apply_raw(g_, op, rule_, rec_, op_index_);
  led_.t = m_.t;
  switch (op.kind) {
    case OpKind::InsertVertex:
      refresh(op.a);
      break;
    case OpKind::DeleteVertex:
      index_.erase(op.a);
      for (VertexId w : touched) refresh(w);
      break;
    default:
      if (op.is_edge_update()) {
        refresh(op.a);
        refresh(op.b);
      }
      break;
  }
  rec_.end_op();
  ++op_index_;
}

void AdjStruct::reset_vertex(VertexId v) {
  led_.outdeg_charges += g_.outdeg(v);
  if (g_.outdeg(v) <= delta_prime_) return;
  led_.resets++;
  std::vector<VertexId> outs(g_.out(v).begin(), g_.out(v).end());
  for (VertexId w : outs) {
    rec_.flip(v, w);
    led_.free_flips++;
  }
}

bool AdjStruct::adjacency_query(VertexId u, VertexId v) {
  if (!g_.alive(u) || !g_.alive(v))
    throw OpError("adjacency query on dead vertex");
  UpdateOp op{OpKind::AdjacencyQuery, u, v, 0};
  rec_.begin_op(op);
  reset_vertex(u);
  reset_vertex(v);
  auto lookup = [&](VertexId a, VertexId b) {
    auto it = index_.find(a);
    if (it == index_.end())
      throw InvariantError("missing out-neighbor index at vertex " + std::to_string(a));
    return std::binary_search(it->second.begin(), it->second.end(), b);
  };
  bool ans = lookup(u, v) || lookup(v, u);
  rec_.end_op();
  return ans;
}

void AdjStruct::check_index_coherence() const {
  for (VertexId v : g_.live_vertices()) {
    auto it = index_.find(v);
    if (g_.outdeg(v) < 2 * delta_prime_) {
      if (it == index_.end())
        throw InvariantError("index missing below the build threshold at " + std::to_string(v));
      std::vector<VertexId> expect(g_.out(v).begin(), g_.out(v).end());
      if (it->second != expect)
        throw InvariantError("index out of sync at vertex " + std::to_string(v));
    } else if (it != index_.end()) {
      throw InvariantError("index kept above the build threshold at " + std::to_string(v));
    }
  }
}

// ------------------------------------------------------- forest decomposition

ForestAssignment forest_decompose(const OrientedGraph& g, std::uint32_t delta) {
  for (VertexId v : g.live_vertices())
    if (g.outdeg(v) > delta)
      throw OpError("outdegree " + std::to_string(g.outdeg(v)) + " at vertex " +
                    std::to_string(v) + " exceeds delta " + std::to_string(delta));
  ForestAssignment out;
  for (std::uint32_t s = 0; s < delta; ++s) {
    // slot s: every vertex's s-th out-edge; a functional graph
    std::map<VertexId, VertexId> succ;
    for (VertexId v : g.live_vertices())
      if (g.outdeg(v) > s) succ[v] = *std::next(g.out(v).begin(), s);
    // peel cycles: the edge leaving the smallest cycle vertex moves to delta+s
    std::map<VertexId, int> state;  // 0 fresh, 1 on path, 2 done
    std::vector<VertexId> tails;
    for (auto& [v, h] : succ) tails.push_back(v);
    for (VertexId start : tails) {
      if (state[start]) continue;
      std::vector<VertexId> path;
      VertexId v = start;
      while (succ.count(v) && state[v] == 0) {
        state[v] = 1;
        path.push_back(v);
        v = succ[v];
      }
      if (succ.count(v) && state[v] == 1) {
        auto it = std::find(path.begin(), path.end(), v);
        VertexId smallest = *std::min_element(it, path.end());
        out.emplace_back(std::make_pair(smallest, succ[smallest]), delta + s);
        succ.erase(smallest);  // mark moved so the slot loop below skips it
        state[smallest] = 3;
      }
      for (VertexId p : path)
        if (state[p] == 1) state[p] = 2;
    }
    for (auto& [v, h] : succ) out.emplace_back(std::make_pair(v, h), s);
  }
  return out;
}

std::map<VertexId, ForestLabel> make_labels(const OrientedGraph& g,
                                            const ForestAssignment& assignment) {
  std::map<VertexId, ForestLabel> labels;
  for (VertexId v : g.live_vertices()) labels[v].id = v;
  for (auto& [e, c] : assignment) {
    auto& lab = labels.at(e.first);
    if (lab.parent.count(c))
      throw InvariantError("two parents in forest " + std::to_string(c) + " at vertex " +
                           std::to_string(e.first));
    lab.parent[c] = e.second;  // out-edge points at the parent
  }
  return labels;
}

bool label_adjacent(const ForestLabel& l1, const ForestLabel& l2) {
  for (auto& [c, p] : l1.parent)
    if (p == l2.id) return true;
  for (auto& [c, p] : l2.parent)
    if (p == l1.id) return true;
  return false;
}

}  // namespace orientlab::apps
