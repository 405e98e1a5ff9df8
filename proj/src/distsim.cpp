#include "orientlab/distsim.hpp"

#include <algorithm>
#include <tuple>

namespace orientlab::distsim {

std::uint64_t SimNode::mem_entries() const {
  std::uint64_t e = 3 * out_rec.size() + 2 * free_rec.size() + colored_out.size() +
                    tu_children.size() + 2 * pending_joins.size() + probe_free.size();
  for (auto h : {in_handle, free_handle, match, tu_parent})
    if (h != kNil) ++e;
  e += 3;  // countdown, sub_depth, await_acks
  return e;
}

Network::Network(NetConfig cfg) : cfg_(cfg), rec_(g_, m_) {
  if (cfg_.alpha < 1) throw OpError("alpha must be >= 1");
  if (cfg_.delta < 7 * cfg_.alpha)
    throw OpError("distributed engine requires delta >= 7*alpha");
}

// ------------------------------------------------------------ round engine

void Network::send(VertexId src, VertexId dst, Tag tag, std::int64_t p0, std::int64_t p1,
                   std::int64_t p2) {
  pending_.push_back({src, dst, tag, {p0, p1, p2}, seq_++});
  m_.messages++;
  if (active_cascade_ && (tag == Tag::Explore || tag == Tag::ExploreAck ||
                          tag == Tag::Countdown || tag == Tag::Cascade ||
                          tag == Tag::CascadeFree))
    active_cascade_->cascade_messages++;
}

void Network::meter(VertexId v) {
  auto& n = nodes_[v];
  if (!n.alive) return;
  std::uint64_t e = n.mem_entries();
  n.mem_peak = std::max(n.mem_peak, e);
  m_.peak_mem_entries = std::max(m_.peak_mem_entries, e);
  if (e > 8ull * (cfg_.delta + 2))
    throw InvariantError("memory ceiling exceeded at node " + std::to_string(v) + ": " +
                         std::to_string(e) + " entries");
}

void Network::run_round() {
  ++round_;
  m_.rounds++;
  std::vector<SimMessage> batch = std::move(pending_);
  pending_.clear();
  std::sort(batch.begin(), batch.end(), [](const SimMessage& a, const SimMessage& b) {
    return std::tie(a.src, a.dst, a.seq) < std::tie(b.src, b.dst, b.seq);
  });
  std::set<VertexId> stepped(engaged_.begin(), engaged_.end());
  for (const auto& msg : batch) {
    if (trace) trace(round_, msg);
    awake_.insert(msg.dst);
    stepped.insert(msg.dst);
    deliver(msg);
  }
  uncolored_this_round_ = 0;
  for (VertexId v : stepped) node_step(v);
  for (VertexId v : stepped) meter(v);
  if (active_cascade_ && uncolored_this_round_ > 0) {
    active_cascade_->cascade_rounds++;
    active_cascade_->decay.emplace_back(uncolored_this_round_, colored_edges_.size());
  }
}

void Network::run_until_quiescent() {
  std::uint64_t start = round_;
  while (!pending_.empty() || !engaged_.empty()) {
    if (round_ - start > cfg_.round_limit)
      throw InvariantError("round limit exceeded during op " + std::to_string(op_index_));
    run_round();
  }
}

// ----------------------------------------------------------- message handlers

void Network::deliver(const SimMessage& msg) {
  auto& n = nodes_[msg.dst];
  const auto& p = msg.payload;
  switch (msg.tag) {
    case Tag::Degree:
      n.peer_degree = p[0];
      n.peer_free = p[1] != 0;
      break;
    case Tag::Join:
      // the edge between us flipped toward me (or was just inserted): drop my
      // tail-side records and queue the sender as my newest in-neighbor
      n.colored_out.erase(msg.src);
      n.out_rec.erase(msg.src);
      n.free_rec.erase(msg.src);
      n.pending_joins.emplace_back(msg.src, p[0] != 0);
      break;
    case Tag::JoinAck:
      n.out_rec[msg.src] = {p[0], kNil};
      if (p[2] != 0) n.free_rec[msg.src] = {p[1], kNil};
      break;
    case Tag::SibLeft:
      n.out_rec[msg.src].left = p[0];
      break;
    case Tag::SibRight:
      n.out_rec[msg.src].right = p[0];
      break;
    case Tag::FreeLeft:
      n.free_rec[msg.src].left = p[0];
      break;
    case Tag::FreeRight:
      n.free_rec[msg.src].right = p[0];
      break;
    case Tag::Leave: {
      if (n.in_handle == std::int64_t(msg.src)) n.in_handle = p[0];
      if (p[0] != kNil) send(msg.dst, VertexId(p[0]), Tag::SibRight, p[1]);
      if (p[1] != kNil) send(msg.dst, VertexId(p[1]), Tag::SibLeft, p[0]);
      break;
    }
    case Tag::LeaveFree: {
      if (n.free_handle == std::int64_t(msg.src)) n.free_handle = p[0];
      if (p[0] != kNil) send(msg.dst, VertexId(p[0]), Tag::FreeRight, p[1]);
      if (p[1] != kNil) send(msg.dst, VertexId(p[1]), Tag::FreeLeft, p[0]);
      break;
    }
    case Tag::Explore: {
      if (n.colored) {
        send(msg.dst, msg.src, Tag::ExploreAck, 0, 0);  // duplicate visit
        break;
      }
      n.colored = true;
      n.tu_parent = msg.src;
      n.sub_depth = 0;
      n.internal = n.out_rec.size() > cfg_.delta - 5 * cfg_.alpha;
      engaged_.insert(msg.dst);
      if (active_cascade_) active_cascade_->gu_nodes++;
      if (n.internal) {
        for (auto& [h, r] : n.out_rec) {
          n.colored_out.insert(h);
          colored_edges_.insert({msg.dst, h});
        }
        if (active_cascade_) active_cascade_->gu_edges += n.colored_out.size();
        n.await_acks = std::uint32_t(n.colored_out.size());
        for (VertexId h : n.colored_out) send(msg.dst, h, Tag::Explore, p[0] + 1);
        if (n.await_acks == 0) send(msg.dst, msg.src, Tag::ExploreAck, 0, 1);
      } else {
        send(msg.dst, msg.src, Tag::ExploreAck, 0, 1);
      }
      break;
    }
    case Tag::ExploreAck: {
      if (p[1] != 0) {
        n.tu_children.insert(msg.src);
        n.sub_depth = std::max<std::uint32_t>(n.sub_depth, std::uint32_t(p[0]) + 1);
      }
      if (--n.await_acks == 0) {
        if (n.tu_parent != kNil) {
          send(msg.dst, VertexId(n.tu_parent), Tag::ExploreAck, n.sub_depth, 1);
        } else {
          // root: height known, start the synchronized countdown
          n.countdown = n.sub_depth;
          for (VertexId c : n.tu_children)
            send(msg.dst, c, Tag::Countdown, n.sub_depth - 1);
        }
      }
      break;
    }
    case Tag::Countdown:
      if (n.countdown == kNil && !n.cascading) {
        n.countdown = p[0];
        if (p[0] > 0)
          for (VertexId c : n.tu_children) send(msg.dst, c, Tag::Countdown, p[0] - 1);
      }
      break;
    case Tag::Cascade:
      if (n.colored) n.recv_cascade.push_back({msg.src, {p[0], p[1]}, {}, false});
      break;
    case Tag::CascadeFree:
      for (auto& r : n.recv_cascade)
        if (r.src == msg.src) {
          r.free_links = {p[0], p[1]};
          r.has_free = true;
        }
      break;
    case Tag::Status:
      if (p[0] != 0) {
        // sender became free: append to my free chain
        std::int64_t old = n.free_handle;
        n.free_handle = msg.src;
        send(msg.dst, msg.src, Tag::FreeLeft, old);
        if (old != kNil) send(msg.dst, VertexId(old), Tag::FreeRight, msg.src);
      } else {
        n.pending_free_removals.push_back({msg.src, {p[1], p[2]}});
      }
      break;
    case Tag::Probe:
      send(msg.dst, msg.src, Tag::ProbeReply, n.is_free() ? 1 : 0);
      break;
    case Tag::ProbeReply:
      if (p[0] != 0) n.probe_free.push_back(msg.src);
      break;
    case Tag::Propose:
      if (!n.is_free())
        throw InvariantError("proposal to a non-free vertex " + std::to_string(msg.dst));
      n.match = msg.src;
      send(msg.dst, msg.src, Tag::Accept);
      break;
    case Tag::Accept:
      n.match = msg.src;
      break;
    case Tag::Match:
      n.match = msg.src;
      break;
  }
}

// ------------------------------------------------------------ chain surgery

namespace {

// Removes `removed` (with their self-reported links) from a doubly linked
// chain in one batch: adjacent removed members collapse into runs, then the
// two surviving anchors of each run are relinked.
struct BatchRemoval {
  std::map<VertexId, ChainRec> removed;
  // (anchor, set-left-or-right, value)
  struct Splice {
    VertexId anchor;
    bool set_right;
    std::int64_t value;
  };
  std::vector<Splice> splices;

  void compute(std::int64_t& handle) {
    for (auto& [x, links] : removed) {
      if (links.left != kNil && removed.count(VertexId(links.left))) continue;  // not a run head
      VertexId end = x;
      while (removed[end].right != kNil && removed.count(VertexId(removed[end].right)))
        end = VertexId(removed[end].right);
      std::int64_t l = links.left, r = removed[end].right;
      if (l != kNil) splices.push_back({VertexId(l), true, r});
      if (r != kNil) splices.push_back({VertexId(r), false, l});
    }
    while (handle != kNil && removed.count(VertexId(handle)))
      handle = removed[VertexId(handle)].left;
  }
};

}  // namespace

void Network::fire(VertexId v) {
  auto& n = nodes_[v];
  BatchRemoval chain, free_chain;
  for (auto& r : n.recv_cascade) {
    if (chain.removed.count(r.src)) continue;
    chain.removed[r.src] = r.links;
    if (r.has_free) free_chain.removed[r.src] = r.free_links;
    if (colored_edges_.erase({r.src, v})) uncolored_this_round_++;
  }
  for (VertexId h : n.colored_out)
    if (colored_edges_.erase({v, h})) uncolored_this_round_++;
  for (auto& [src, links] : chain.removed) {
    rec_.flip(src, v);
    send(v, src, Tag::Join, n.is_free() ? 1 : 0);
  }
  chain.compute(n.in_handle);
  for (auto& s : chain.splices) send(v, s.anchor, s.set_right ? Tag::SibRight : Tag::SibLeft, s.value);
  if (!free_chain.removed.empty()) {
    free_chain.compute(n.free_handle);
    for (auto& s : free_chain.splices)
      send(v, s.anchor, s.set_right ? Tag::FreeRight : Tag::FreeLeft, s.value);
  }
  n.recv_cascade.clear();
  n.colored_out.clear();
  n.colored = false;
  n.cascading = false;
  n.volleyed = false;
  n.internal = false;
  n.tu_parent = kNil;
  n.tu_children.clear();
  n.sub_depth = 0;
}

void Network::apply_pending_joins(VertexId v) {
  auto& n = nodes_[v];
  for (auto& [z, zfree] : n.pending_joins) {
    std::int64_t old = n.in_handle;
    n.in_handle = z;
    bool join_free = cfg_.matching && zfree;
    std::int64_t fold = join_free ? n.free_handle : kNil;
    if (join_free) n.free_handle = z;
    send(v, z, Tag::JoinAck, old, fold, join_free ? 1 : 0);
    if (old != kNil) send(v, VertexId(old), Tag::SibRight, z);
    if (join_free && fold != kNil) send(v, VertexId(fold), Tag::FreeRight, z);
  }
  n.pending_joins.clear();
}

void Network::node_step(VertexId v) {
  auto& n = nodes_[v];
  if (!n.alive) return;
  if (n.countdown != kNil) {
    if (n.countdown == 0) {
      n.cascading = true;
      n.countdown = kNil;
    } else {
      --n.countdown;
    }
  }
  if (n.colored && n.cascading && n.volleyed &&
      n.colored_out.size() + n.recv_cascade.size() <= 5 * cfg_.alpha)
    fire(v);
  if (!n.pending_free_removals.empty()) {
    BatchRemoval b;
    for (auto& [src, links] : n.pending_free_removals) b.removed[src] = links;
    n.pending_free_removals.clear();
    b.compute(n.free_handle);
    for (auto& s : b.splices)
      send(v, s.anchor, s.set_right ? Tag::FreeRight : Tag::FreeLeft, s.value);
  }
  if (!n.colored && !n.pending_joins.empty()) apply_pending_joins(v);
  if (n.colored && n.cascading) {
    for (VertexId h : n.colored_out) {
      auto& rec = n.out_rec.at(h);
      send(v, h, Tag::Cascade, rec.left, rec.right);
      if (cfg_.matching && n.is_free()) {
        auto& fr = n.free_rec.at(h);
        send(v, h, Tag::CascadeFree, fr.left, fr.right);
      }
    }
    n.volleyed = true;
  }
  n.recv_cascade.clear();
  if (!n.colored && n.countdown == kNil && !n.cascading)
    engaged_.erase(v);
  else
    engaged_.insert(v);
}

// ---------------------------------------------------------------- protocols

void Network::start_cascade(VertexId u) {
  cascades_.push_back({});
  active_cascade_ = &cascades_.back();
  active_cascade_->trigger = u;
  active_cascade_->gu_nodes = 1;
  colored_edges_.clear();
  auto& n = nodes_[u];
  n.colored = true;
  n.internal = true;
  n.tu_parent = kNil;
  n.sub_depth = 0;
  for (auto& [h, r] : n.out_rec) {
    n.colored_out.insert(h);
    colored_edges_.insert({u, h});
  }
  active_cascade_->gu_edges = n.colored_out.size();
  n.await_acks = std::uint32_t(n.colored_out.size());
  engaged_.insert(u);
  awake_.insert(u);
  for (VertexId h : n.colored_out) send(u, h, Tag::Explore, 1);
  run_until_quiescent();
  active_cascade_ = nullptr;
}

void Network::notify_status(VertexId x) {
  auto& n = nodes_[x];
  bool f = n.is_free();
  awake_.insert(x);
  for (auto& [h, r] : n.out_rec) {
    auto it = n.free_rec.find(h);
    std::int64_t fl = it == n.free_rec.end() ? kNil : it->second.left;
    std::int64_t fr = it == n.free_rec.end() ? kNil : it->second.right;
    send(x, h, Tag::Status, f ? 1 : 0, fl, fr);
  }
  if (!f) n.free_rec.clear();
}

void Network::rematch(VertexId x) {
  auto& n = nodes_[x];
  if (!n.is_free()) return;
  awake_.insert(x);
  if (n.free_handle != kNil) {
    send(x, VertexId(n.free_handle), Tag::Propose);
    run_until_quiescent();
  } else if (!n.out_rec.empty()) {
    for (auto& [h, r] : n.out_rec) send(x, h, Tag::Probe);
    run_until_quiescent();
    if (!n.probe_free.empty()) {
      VertexId y = *std::min_element(n.probe_free.begin(), n.probe_free.end());
      n.probe_free.clear();
      send(x, y, Tag::Propose);
      run_until_quiescent();
    }
    n.probe_free.clear();
  }
  if (n.match != kNil) {
    VertexId y = VertexId(n.match);
    notify_status(x);
    notify_status(y);
    run_until_quiescent();
  }
}

void Network::insert_edge(VertexId a, VertexId b, bool directed) {
  if (!g_.alive(a) || !g_.alive(b))
    throw OpError("edge insert on dead vertex");
  VertexId tail = a, head = b;
  if (!directed) {
    send(a, b, Tag::Degree, g_.outdeg(a), nodes_[a].is_free() ? 1 : 0);
    send(b, a, Tag::Degree, g_.outdeg(b), nodes_[b].is_free() ? 1 : 0);
    run_round();
    // from the vertex of lower outdegree to the higher; ties toward higher id
    if (g_.outdeg(a) > g_.outdeg(b) || (g_.outdeg(a) == g_.outdeg(b) && a > b)) {
      tail = b;
      head = a;
    }
  }
  g_.insert_directed(tail, head);
  m_.t++;
  rec_.note_outdeg(tail);
  nodes_[tail].out_rec[head] = {};
  send(tail, head, Tag::Join, nodes_[tail].is_free() ? 1 : 0);
  run_until_quiescent();
  if (cfg_.matching && nodes_[tail].is_free() && nodes_[head].is_free()) {
    nodes_[tail].match = head;
    send(tail, head, Tag::Match);
    run_until_quiescent();
    notify_status(tail);
    notify_status(head);
    run_until_quiescent();
  }
  if (g_.outdeg(tail) > cfg_.delta) start_cascade(tail);
}

void Network::delete_edge(VertexId a, VertexId b) {
  if (!g_.oriented(a, b) && !g_.oriented(b, a))
    throw OpError("missing edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  VertexId tail = g_.oriented(a, b) ? a : b;
  VertexId head = tail == a ? b : a;
  auto& tn = nodes_[tail];
  bool was_matched = cfg_.matching && tn.match == std::int64_t(head);
  auto rec = tn.out_rec.at(head);
  send(tail, head, Tag::Leave, rec.left, rec.right);
  if (cfg_.matching && tn.is_free()) {
    auto fr = tn.free_rec.at(head);
    send(tail, head, Tag::LeaveFree, fr.left, fr.right);
  }
  tn.out_rec.erase(head);
  tn.free_rec.erase(head);
  g_.delete_edge(tail, head);
  m_.t++;
  rec_.note_outdeg(tail);
  run_until_quiescent();
  if (was_matched) {
    // each endpoint locally observes the loss of its matched edge
    nodes_[tail].match = kNil;
    nodes_[head].match = kNil;
    notify_status(tail);
    notify_status(head);
    run_until_quiescent();
    rematch(a);
    if (nodes_[b].is_free()) rematch(b);
  }
}

void Network::apply(const UpdateOp& op) {
  awake_.clear();
  awake_.insert(op.a);
  rec_.begin_op(op);
  switch (op.kind) {
    case OpKind::InsertVertex:
      if (op.a >= nodes_.size()) nodes_.resize(op.a + 1);
      nodes_[op.a] = SimNode{};
      nodes_[op.a].alive = true;
      g_.insert_vertex(op.a);
      break;
    case OpKind::DeleteVertex: {
      if (!g_.alive(op.a)) throw OpError("dead or unknown vertex " + std::to_string(op.a));
      while (!g_.neighbors(op.a).empty()) delete_edge(op.a, g_.neighbors(op.a).front());
      g_.delete_vertex(op.a);
      nodes_[op.a] = SimNode{};
      break;
    }
    case OpKind::InsertEdge:
    case OpKind::InsertEdgeDirected:
      awake_.insert(op.b);
      insert_edge(op.a, op.b, op.kind == OpKind::InsertEdgeDirected);
      break;
    case OpKind::DeleteEdge:
      awake_.insert(op.b);
      delete_edge(op.a, op.b);
      break;
    case OpKind::AdjacencyQuery:
    case OpKind::SetValue:
      break;  // no distributed meaning here
  }
  rec_.end_op();
  for (VertexId v : awake_)
    if (v < nodes_.size()) meter(v);
  ++op_index_;
}

void Network::apply_all(const UpdateSequence& seq) {
  for (const auto& op : seq.ops) apply(op);
}

// ------------------------------------------------------------ verification

std::vector<VertexId> Network::chain_members(VertexId parent, bool free_chain) const {
  std::vector<VertexId> out;
  std::int64_t cur =
      free_chain ? nodes_[parent].free_handle : nodes_[parent].in_handle;
  std::size_t guard = nodes_.size() + 1;
  while (cur != kNil) {
    if (out.size() > guard)
      throw InvariantError("cyclic sibling chain at vertex " + std::to_string(parent));
    out.push_back(VertexId(cur));
    const auto& recs = free_chain ? nodes_[cur].free_rec : nodes_[cur].out_rec;
    auto it = recs.find(parent);
    if (it == recs.end())
      throw InvariantError("chain member " + std::to_string(cur) + " has no record under " +
                           std::to_string(parent));
    cur = it->second.left;
  }
  return out;
}

void Network::check_representation() const {
  for (VertexId v : g_.live_vertices()) {
    auto members = chain_members(v, false);
    std::set<VertexId> got(members.begin(), members.end());
    if (got.size() != members.size() || got != g_.in(v))
      throw InvariantError("sibling chain of " + std::to_string(v) +
                           " disagrees with the in-neighbor set");
    if (cfg_.matching) {
      auto fmembers = chain_members(v, true);
      std::set<VertexId> fgot(fmembers.begin(), fmembers.end());
      std::set<VertexId> expect;
      for (VertexId u : g_.in(v))
        if (nodes_[u].is_free()) expect.insert(u);
      if (fgot.size() != fmembers.size() || fgot != expect)
        throw InvariantError("free chain of " + std::to_string(v) +
                             " disagrees with the free in-neighbor set");
    }
  }
}

void Network::check_memory() const {
  for (VertexId v = 0; v < nodes_.size(); ++v)
    if (nodes_[v].alive && nodes_[v].mem_peak > 8ull * (cfg_.delta + 2))
      throw InvariantError("memory ceiling exceeded at node " + std::to_string(v));
}

std::vector<std::pair<VertexId, VertexId>> Network::matching() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId v = 0; v < nodes_.size(); ++v)
    if (nodes_[v].alive && nodes_[v].match != kNil && VertexId(nodes_[v].match) > v)
      out.emplace_back(v, VertexId(nodes_[v].match));
  return out;
}

}  // namespace orientlab::distsim
