#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "orientlab/distsim.hpp"
#include "orientlab/oracles.hpp"

using namespace orientlab;
using distsim::NetConfig;
using distsim::Network;

namespace {

// Directed tree of internal nodes plus extra root edges; the last insertion
// pushes the root's outdegree past delta and triggers a cascade.
UpdateSequence cascade_tree_seq(std::uint32_t fan, std::uint32_t extra) {
  UpdateSequence seq;
  VertexId next = 0;
  VertexId root = next++;
  std::vector<VertexId> l1;
  for (std::uint32_t i = 0; i < fan; ++i) l1.push_back(next++);
  std::vector<VertexId> l2;
  for (std::size_t c = 0; c < l1.size(); ++c)
    for (std::uint32_t i = 0; i < fan; ++i) l2.push_back(next++);
  std::vector<VertexId> tail;
  for (std::uint32_t i = 0; i < extra; ++i) tail.push_back(next++);
  for (VertexId v = 0; v < next; ++v) seq.ops.push_back({OpKind::InsertVertex, v, 0, 0});
  for (VertexId c : l1) seq.ops.push_back({OpKind::InsertEdgeDirected, root, c, 0});
  std::size_t k = 0;
  for (VertexId c : l1)
    for (std::uint32_t i = 0; i < fan; ++i)
      seq.ops.push_back({OpKind::InsertEdgeDirected, c, l2[k++], 0});
  for (VertexId e : tail) seq.ops.push_back({OpKind::InsertEdgeDirected, root, e, 0});
  return seq;
}

}  // namespace

TEST_CASE("no work means no rounds") {
  Network net(NetConfig{});
  net.apply({OpKind::InsertVertex, 0, 0, 0});
  CHECK(net.metrics().rounds == 0);
  CHECK(net.metrics().messages == 0);
}

TEST_CASE("a single directed insert settles in two rounds") {
  Network net(NetConfig{});
  net.apply({OpKind::InsertVertex, 0, 0, 0});
  net.apply({OpKind::InsertVertex, 1, 0, 0});
  net.apply({OpKind::InsertEdgeDirected, 0, 1, 0});
  CHECK(net.metrics().rounds == 2);  // Join, then JoinAck
  CHECK(net.graph().oriented(0, 1));
  net.check_representation();
}

TEST_CASE("undirected inserts orient from the lower-outdegree endpoint") {
  Network net(NetConfig{});
  for (VertexId v = 0; v < 5; ++v) net.apply({OpKind::InsertVertex, v, 0, 0});
  net.apply({OpKind::InsertEdgeDirected, 0, 1, 0});
  net.apply({OpKind::InsertEdgeDirected, 0, 2, 0});
  net.apply({OpKind::InsertEdge, 0, 3, 0});
  CHECK(net.graph().oriented(3, 0));  // outdeg 0 vs 2
  net.apply({OpKind::InsertEdge, 3, 4, 0});
  CHECK(net.graph().oriented(4, 3));  // outdeg 0 vs 1
  net.apply({OpKind::InsertEdge, 2, 1, 0});
  CHECK(net.graph().oriented(1, 2));  // tie breaks toward the lower id as tail
}

TEST_CASE("message traces replay identically") {
  auto seq = test::random_seq(2, 24, 150, 51, 0.3);
  auto run = [&] {
    Network net(NetConfig{});
    std::ostringstream os;
    net.trace = [&](std::uint64_t r, const distsim::SimMessage& m) {
      os << r << ":" << m.src << ">" << m.dst << "/" << int(m.tag) << ";";
    };
    net.apply_all(seq);
    return os.str();
  };
  CHECK(run() == run());
}

TEST_CASE("representation and memory hold through random churn") {
  NetConfig cfg;
  cfg.alpha = 2;
  Network net(cfg);
  auto seq = test::random_seq(2, 48, 500, 53, 0.35);
  std::size_t step = 0;
  for (const auto& op : seq.ops) {
    net.apply(op);
    if (++step % 10 == 0) net.check_representation();
  }
  net.check_representation();
  net.check_memory();
  CHECK(net.metrics().peak_mem_entries <= 8 * (cfg.delta + 2));
}

TEST_CASE("graceful deletion splices the middle of a sibling chain") {
  Network net(NetConfig{});
  for (VertexId v = 0; v < 4; ++v) net.apply({OpKind::InsertVertex, v, 0, 0});
  for (VertexId v = 1; v < 4; ++v) net.apply({OpKind::InsertEdgeDirected, v, 0, 0});
  net.check_representation();
  net.apply({OpKind::DeleteEdge, 2, 0, 0});  // middle of the chain 1,2,3
  net.check_representation();
  CHECK(net.graph().in(0) == std::set<VertexId>{1, 3});
}

TEST_CASE("triggered cascade meets the distributed ceilings") {
  auto seq = cascade_tree_seq(6, 9);
  NetConfig cfg;
  cfg.alpha = 2;
  cfg.delta = 14;
  Network net(cfg);
  net.apply_all(seq);
  REQUIRE(net.cascades().size() == 1);
  const auto& c = net.cascades()[0];
  CHECK(c.trigger == 0);
  CHECK(c.gu_edges == 51);
  // rounds: ceil(log2 |N_u|) + 2
  std::uint64_t lg = 0;
  while ((1ull << lg) < c.gu_nodes) ++lg;
  CHECK(c.cascade_rounds <= lg + 2);
  CHECK(c.cascade_messages <= 4 * c.gu_edges + 4 * c.gu_nodes);
  std::uint64_t total_uncolored = 0;
  for (auto& [gone, left] : c.decay) {
    CHECK(gone >= left);  // at least half the colored edges clear per round
    total_uncolored += gone;
  }
  CHECK(total_uncolored == c.gu_edges);
  // the region settles under the fire threshold
  for (VertexId v : net.graph().live_vertices())
    CHECK(net.graph().outdeg(v) <= 5 * cfg.alpha);
  net.check_representation();
  net.check_memory();
}

TEST_CASE("cascade with the matching overlay keeps free chains intact") {
  auto seq = cascade_tree_seq(6, 9);
  NetConfig cfg;
  cfg.alpha = 2;
  cfg.delta = 14;
  cfg.matching = true;
  Network net(cfg);
  net.apply_all(seq);
  REQUIRE(net.cascades().size() == 1);
  net.check_representation();
  auto viol = oracles::check_maximal_matching(net.graph(), net.matching());
  if (viol) FAIL(viol->reason << " at (" << viol->a << "," << viol->b << ")");
}

TEST_CASE("distributed matching stays maximal through random churn") {
  NetConfig cfg;
  cfg.alpha = 2;
  cfg.matching = true;
  Network net(cfg);
  auto seq = test::random_seq(2, 48, 500, 59, 0.35);
  std::size_t step = 0;
  for (const auto& op : seq.ops) {
    net.apply(op);
    if (++step % 10 == 0) {
      auto viol = oracles::check_maximal_matching(net.graph(), net.matching());
      if (viol) FAIL(viol->reason << " at (" << viol->a << "," << viol->b << ")");
      net.check_representation();
    }
  }
}

TEST_CASE("wakeup discipline: untouched nodes never execute") {
  Network net(NetConfig{});
  for (VertexId v = 0; v < 6; ++v) net.apply({OpKind::InsertVertex, v, 0, 0});
  net.apply({OpKind::InsertEdgeDirected, 0, 1, 0});
  net.apply({OpKind::InsertEdgeDirected, 2, 3, 0});
  net.apply({OpKind::InsertEdgeDirected, 4, 5, 0});
  net.apply({OpKind::InsertEdgeDirected, 0, 2, 0});
  for (VertexId v : {4u, 5u}) CHECK(net.last_awake().count(v) == 0);
}

TEST_CASE("round limit aborts runaway protocols") {
  NetConfig cfg;
  cfg.round_limit = 0;
  Network net(cfg);
  net.apply({OpKind::InsertVertex, 0, 0, 0});
  net.apply({OpKind::InsertVertex, 1, 0, 0});
  CHECK_THROWS_AS(net.apply({OpKind::InsertEdgeDirected, 0, 1, 0}), InvariantError);
}

TEST_CASE("payload budget is three fields") {
  static_assert(sizeof(distsim::SimMessage::payload) == 3 * sizeof(std::int64_t));
  CHECK(true);
}
