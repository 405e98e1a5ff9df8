#pragma once

#include <array>
#include <deque>

#include "orientlab/core.hpp"

namespace orientlab::distsim {

inline constexpr std::int64_t kNil = -1;

enum class Tag : std::uint8_t {
  Degree,       // insert handshake: outdegree, free bit
  Join,         // "the edge toward you is now mine, append me to your chain"
  JoinAck,      // parent -> new member: your left sibling
  SibLeft,      // parent -> member: your left sibling is payload[0]
  SibRight,     // parent -> member: your right sibling is payload[0]
  FreeLeft,     // parent -> member: your free-chain left sibling is payload[0]
  FreeRight,    // parent -> member: your free-chain right sibling is payload[0]
  Leave,        // member -> parent: graceful removal, my (left, right)
  LeaveFree,    // member -> parent: remove me from your free chain, my links
  Explore,      // cascade phase 1, payload = depth
  ExploreAck,   // phase 1 convergecast: subtree height, is-tu-child bit
  Countdown,    // phase 2, payload = remaining rounds
  Cascade,      // phase 3 per-round send on a colored edge; my chain links under you
  CascadeFree,  // same, my free-chain links under you (matching overlay)
  Status,       // matching: free bit + my free-chain links under you
  Probe,        // matching: are you free?
  ProbeReply,   // matching: free bit
  Propose,      // matching: match with me?
  Accept,       // matching: proposal accepted
  Match,        // matching: insert handshake concluded in a match
};

struct SimMessage {
  VertexId src = 0, dst = 0;
  Tag tag = Tag::Degree;
  std::array<std::int64_t, 3> payload{kNil, kNil, kNil};
  std::uint64_t seq = 0;  // delivery tie-break only
};
static_assert(std::tuple_size<decltype(SimMessage::payload)>::value == 3,
              "CONGEST payload budget");

/// A member's doubly-linked position inside one parent's sibling chain.
struct ChainRec {
  std::int64_t left = kNil;
  std::int64_t right = kNil;
};

/// A simulated processor's entire local state. Everything a node reads during
/// a round lives here or in the messages delivered to it.
struct SimNode {
  bool alive = false;

  // complete representation: my links per parent, plus my own chain tail
  std::map<VertexId, ChainRec> out_rec;
  std::int64_t in_handle = kNil;

  // matching overlay
  std::int64_t match = kNil;
  std::map<VertexId, ChainRec> free_rec;  // my links in each parent's free chain
  std::int64_t free_handle = kNil;

  // anti-reset scratch
  bool colored = false;
  bool internal = false;
  bool cascading = false;
  // set after the first announcement round while cascading; the fire rule may
  // only read recv_cascade once the neighbors have had a round to announce
  bool volleyed = false;
  std::int64_t tu_parent = kNil;
  std::set<VertexId> tu_children;
  std::set<VertexId> colored_out;
  std::uint32_t sub_depth = 0;
  std::uint32_t await_acks = 0;
  std::int64_t countdown = kNil;

  // per-round buffers
  struct RecvEdge {
    VertexId src;
    ChainRec links;
    ChainRec free_links;
    bool has_free = false;
  };
  std::vector<RecvEdge> recv_cascade;
  std::vector<std::pair<VertexId, bool>> pending_joins;  // (joiner, joiner_free)
  std::vector<std::pair<VertexId, ChainRec>> pending_free_removals;
  std::vector<VertexId> probe_free;
  std::int64_t peer_degree = kNil;
  bool peer_free = false;

  std::uint64_t mem_peak = 0;

  bool is_free() const { return alive && match == kNil; }
  std::uint64_t mem_entries() const;
};

/// Per-cascade audit for the distributed anti-reset.
struct CascadeReport {
  VertexId trigger = 0;
  std::size_t gu_nodes = 0;  // |N_u|
  std::size_t gu_edges = 0;  // |E(G_u)|
  std::uint64_t cascade_rounds = 0;    // phase 3 only
  std::uint64_t cascade_messages = 0;  // phases 1-3, repair excluded
  // per phase-3 round: (edges uncolored this round, colored edges remaining)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> decay;
};

struct NetConfig {
  std::uint32_t alpha = 2;
  std::uint32_t delta = 14;  // default 7*alpha, so delta - 5*alpha = 2*alpha
  std::uint64_t round_limit = 100000;
  bool matching = false;
};

/// Deterministic synchronous simulator with local wakeup. Messages sent in
/// round k are delivered at the start of round k+1 in (src, dst, seq) order.
/// The embedded OrientedGraph mirrors ground truth for metering and
/// verification only; protocol decisions read node-local state and messages.
class Network {
 public:
  explicit Network(NetConfig cfg);

  void apply(const UpdateOp& op);
  void apply_all(const UpdateSequence& seq);

  const NetConfig& config() const { return cfg_; }
  const OrientedGraph& graph() const { return g_; }
  const Metrics& metrics() const { return m_; }
  const SimNode& node(VertexId v) const { return nodes_.at(v); }
  const std::vector<CascadeReport>& cascades() const { return cascades_; }
  const std::set<VertexId>& last_awake() const { return awake_; }
  std::uint64_t round() const { return round_; }
  std::vector<std::pair<VertexId, VertexId>> matching() const;

  /// Sibling chains (and free chains, in matching mode) vs the true in-sets.
  void check_representation() const;
  /// mem_meter ceiling, also asserted at every round boundary.
  void check_memory() const;

  std::function<void(std::uint64_t round, const SimMessage&)> trace;

 private:
  void send(VertexId src, VertexId dst, Tag tag, std::int64_t p0 = kNil,
            std::int64_t p1 = kNil, std::int64_t p2 = kNil);
  void run_round();
  void run_until_quiescent();
  void deliver(const SimMessage& msg);
  void node_step(VertexId v);
  void fire(VertexId v);
  void apply_pending_joins(VertexId v);
  void meter(VertexId v);

  void insert_edge(VertexId a, VertexId b, bool directed);
  void delete_edge(VertexId a, VertexId b);
  void start_cascade(VertexId u);
  void notify_status(VertexId x);
  void rematch(VertexId x);
  std::vector<VertexId> chain_members(VertexId parent, bool free_chain) const;

  NetConfig cfg_;
  OrientedGraph g_;
  Metrics m_;
  Recorder rec_;
  std::vector<SimNode> nodes_;
  std::vector<SimMessage> pending_;
  std::uint64_t seq_ = 0;
  std::uint64_t round_ = 0;
  std::set<VertexId> awake_;
  std::vector<CascadeReport> cascades_;
  CascadeReport* active_cascade_ = nullptr;
  // observer-side cascade audit plus the set of nodes that must step even
  // without incoming messages (colored, cascading, or counting down)
  std::set<std::pair<VertexId, VertexId>> colored_edges_;
  std::set<VertexId> engaged_;
  std::uint64_t uncolored_this_round_ = 0;
  std::size_t op_index_ = 0;
};

}  // namespace orientlab::distsim
