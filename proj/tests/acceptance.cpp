// Acceptance suite: one pass/fail line per criterion, tolerances pinned in
// the code next to each check. Every run in here is deterministic.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "orientlab/apps.hpp"
#include "orientlab/distsim.hpp"
#include "orientlab/flipgame.hpp"
#include "orientlab/generators.hpp"
#include "orientlab/oracles.hpp"
#include "orientlab/orient.hpp"

using namespace orientlab;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw Failure(msg);
}

int g_failed = 0;
int g_only = 0;  // nonzero: run a single criterion, for spot re-checks

void criterion(int idx, const char* name, const std::function<std::string()>& body) {
  if (g_only && idx != g_only) return;
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
    ++g_failed;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %2d %-28s (%.1fs) %s\n", ok ? "PASS" : "FAIL", idx, name, secs,
              detail.c_str());
  std::fflush(stdout);
}

UpdateSequence random_seq(std::uint32_t alpha, std::uint32_t n, std::uint64_t t,
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

std::uint32_t ceil_log2(std::uint64_t x) {
  std::uint32_t lg = 0;
  while ((1ull << lg) < x) ++lg;
  return lg;
}

// ------------------------------------------------------------- criterion 1

std::string forest_safety() {
  const std::size_t kSequences = 200;   // pinned
  const std::uint32_t kN = 1000;        // pinned
  const std::uint64_t kT = 10000;       // pinned
  std::uint64_t runs = 0;
  std::uint32_t worst = 0;
  for (std::size_t s = 0; s < kSequences; ++s) {
    auto seq = random_seq(1, kN, kT, 1000 + s, 0.3);
    for (std::uint32_t delta : {2u, 4u}) {
      for (auto ord : {orient::CascadeOrder::FIFO, orient::CascadeOrder::LIFO,
                       orient::CascadeOrder::LargestFirst}) {
        orient::OrientConfig cfg;
        cfg.delta = delta;
        cfg.alpha = 1;
        cfg.order = ord;
        auto m = orient::run_sequence(orient::Algo::BF, seq, cfg);
        require(m.peak_outdeg <= delta + 1,
                "peak " + std::to_string(m.peak_outdeg) + " > delta+1 at seed " +
                    std::to_string(1000 + s));
        worst = std::max(worst, m.peak_outdeg - delta);
        ++runs;
      }
    }
  }
  return std::to_string(runs) + " runs, zero violations of peak <= delta+1";
}

// ------------------------------------------------------------- criterion 2

std::string blowup_reproduction() {
  auto gadget = gen::gen_blowup_tree(3, 7);  // pinned: delta 3, height 7
  orient::OrientConfig cfg;
  cfg.delta = 3;
  cfg.order = orient::CascadeOrder::FIFO;
  cfg.rule = InsertRule::Directive;
  cfg.track_vertex_peaks = true;
  orient::Maintainer m(orient::Algo::BF, cfg);
  m.apply_all(gadget.seq);
  std::uint32_t peak = m.recorder().vertex_peak(gadget.vstar);
  require(peak >= 729, "vstar peak " + std::to_string(peak) + " < 729");
  require(peak >= gadget.n / (2 * 3), "vstar peak below n/(2*delta)");

  orient::OrientConfig anti;
  anti.delta = 14;  // pinned: 7 * alpha
  anti.alpha = 2;
  anti.rule = InsertRule::Directive;
  orient::Maintainer a(orient::Algo::AntiReset, anti);
  a.apply_all(gadget.seq);
  require(a.metrics().peak_outdeg <= anti.delta + 1,
          "anti-reset peak " + std::to_string(a.metrics().peak_outdeg) + " > delta+1");
  return "vstar peak " + std::to_string(peak) + " = 3^6; anti-reset peak " +
         std::to_string(a.metrics().peak_outdeg) + " <= 15";
}

// ------------------------------------------------------------- criterion 3

std::string largest_first_upper() {
  const std::uint32_t kN = 1 << 12;  // pinned
  const std::uint64_t kT = 100000;   // pinned
  const std::uint32_t kDelta = 4;
  std::uint64_t runs = 0;
  for (std::size_t s = 0; s < 100; ++s) {
    std::uint32_t alpha = 1 + s % 3;
    auto seq = random_seq(alpha, kN, kT, 3000 + s, 0.25);
    orient::OrientConfig cfg;
    cfg.delta = kDelta;
    cfg.alpha = alpha;
    orient::Maintainer m(orient::Algo::BFLargest, cfg);
    m.apply_all(seq);
    std::uint32_t bound = 4 * alpha * ceil_log2(kN / alpha) + kDelta;
    require(m.metrics().peak_outdeg <= bound,
            "peak " + std::to_string(m.metrics().peak_outdeg) + " > " + std::to_string(bound) +
                " at seed " + std::to_string(3000 + s));
    ++runs;
  }
  return std::to_string(runs) + " runs under 4a*ceil(log2(n/a))+delta";
}

std::string largest_first_lower() {
  // The trigger makes the largest-first cascade churn without a termination
  // guarantee (delta = 2 < 2*alpha), so each run is stopped by a pinned flip
  // budget after the ascending phase; the claim under test is only that some
  // innermost-cycle vertex is reset at outdegree exactly i on the way up.
  std::string seen;
  for (std::uint32_t i = 8; i <= 12; ++i) {  // pinned range
    auto gadget = gen::gen_gi(i);
    std::set<VertexId> c1(gadget.c1.begin(), gadget.c1.end());
    orient::OrientConfig cfg;
    cfg.delta = 2;  // pinned
    cfg.rule = InsertRule::Directive;
    cfg.flip_budget = 1u << 21;  // pinned: far beyond the ascending phase
    orient::Maintainer m(orient::Algo::BFLargest, cfg);
    bool exact = false;
    m.recorder().on_reset = [&](VertexId v, std::uint32_t outdeg) {
      if (c1.count(v) && outdeg == i) exact = true;
    };
    try {
      m.apply_all(gadget.seq);
    } catch (const InvariantError&) {
      // expected: the budget halts the run after the measurement window
    }
    require(exact, "no C1 vertex was reset at outdegree " + std::to_string(i));
    seen += (seen.empty() ? "" : ",") + std::to_string(i);
  }
  return "C1 reset at outdegree exactly i for i in {" + seen + "}";
}

// ------------------------------------------------------------- criterion 4

std::string antireset_ceilings() {
  const std::uint32_t kDelta = 10;  // pinned
  const std::uint32_t kAlpha = 2;
  std::uint64_t cascades = 0;
  for (std::size_t s = 0; s < 100; ++s) {  // pinned run count
    auto seq = random_seq(kAlpha, 512, 5000, 4000 + s, 0.3);
    orient::OrientConfig cfg;
    cfg.delta = kDelta;
    cfg.alpha = kAlpha;
    orient::Maintainer m(orient::Algo::AntiReset, cfg);
    m.keep_audits(true);
    m.apply_all(seq);
    require(m.metrics().peak_outdeg <= kDelta + 1, "instantaneous peak above delta+1");
    for (const auto& a : m.audits()) {
      require(a.boundary_peak_outdeg <= kDelta, "boundary vertex above delta");
      require(a.max_flips_per_edge <= 1, "a colored edge flipped twice");
    }
    cascades += m.audits().size();
  }
  require(cascades > 0, "no cascade ever triggered; the check was vacuous");
  return std::to_string(cascades) + " cascades audited, all ceilings held";
}

// --------------------------------------------------------- criteria 5 and 6

struct GameRow {
  std::uint64_t c_game = 0, c_bf = 0;
  std::uint64_t game_flips = 0, game_resets = 0;
  std::uint64_t bf_flips = 0, t = 0;
};

GameRow play_row(const UpdateSequence& seq, std::uint32_t delta_bf) {
  GameRow row;
  flipgame::ValueGraph vg(flipgame::GameMode::Basic);
  auto agg = flipgame::aggregate_sum();
  for (const auto& op : seq.ops) vg.game_op(op, agg);
  row.c_game = vg.ledger().c();
  row.game_flips = vg.metrics().f;
  row.game_resets = vg.ledger().resets;

  orient::OrientConfig cfg;
  cfg.delta = delta_bf;
  flipgame::BfMember bf(cfg);
  bf.apply_all(seq);
  row.c_bf = bf.ledger().c();
  row.bf_flips = bf.metrics().f;
  row.t = bf.metrics().t;
  return row;
}

std::string game_competitiveness() {
  const std::uint32_t kAlpha = 2;
  const std::uint32_t kDeltaBf = 4 * kAlpha;  // pinned competitor threshold
  for (std::size_t s = 0; s < 50; ++s) {      // pinned run count
    auto seq = random_seq(kAlpha, 1024, 10000, 5000 + s, 0.2, 0.1, 0.1);
    auto row = play_row(seq, kDeltaBf);
    require(row.c_game <= 2 * row.c_bf,
            "c(R)=" + std::to_string(row.c_game) + " > 2*c(A)=" + std::to_string(2 * row.c_bf) +
                " at seed " + std::to_string(5000 + s));
  }
  return "50 runs, c(R) <= 2*c(A) row by row";
}

std::string game_token_bounds() {
  const std::uint32_t kAlpha = 2;
  const std::uint32_t kDelta = 4 * kAlpha;         // pinned: BF at 4*alpha
  const std::uint32_t kDeltaPrime = 3 * kDelta - 1;  // pinned: 3*delta - 1
  for (std::size_t s = 0; s < 50; ++s) {
    auto seq = random_seq(kAlpha, 1024, 10000, 5000 + s, 0.2, 0.1, 0.1);
    auto row = play_row(seq, kDelta);
    require(row.game_flips <= row.t + row.bf_flips + 2 * kDelta * row.game_resets,
            "basic-game flips exceed t + f + 2*delta*r at seed " + std::to_string(5000 + s));

    flipgame::ValueGraph tg(flipgame::GameMode::Threshold, kDeltaPrime);
    auto agg = flipgame::aggregate_sum();
    for (const auto& op : seq.ops) tg.game_op(op, agg);
    require(tg.metrics().f <= 3 * (row.t + row.bf_flips),
            "threshold-game flips exceed 3*(t+f) at seed " + std::to_string(5000 + s));
  }
  return "50 runs, basic <= t+f+2dr and threshold(3d-1) <= 3(t+f)";
}

// ------------------------------------------------------------- criterion 7

std::string locality() {
  auto gadget = gen::gen_farflip_chain(1022);  // pinned size
  double lg = std::log2(double(gadget.n));
  orient::OrientConfig cfg;
  cfg.delta = 2;
  cfg.rule = InsertRule::Directive;
  cfg.track_flip_distance = true;
  orient::Maintainer m(orient::Algo::BF, cfg);
  m.apply_all(gadget.seq);
  require(double(m.metrics().f) >= lg, "BF flip count below log2 n");
  std::uint32_t maxd = 0;
  for (auto& [d, c] : m.metrics().flip_distance_hist) maxd = std::max(maxd, d);
  require(double(maxd) >= lg / 2, "BF max flip distance below (log2 n)/2");

  // every flipping-game run stays within distance 1 of the operated vertices
  std::uint32_t game_maxd = 0;
  auto agg = flipgame::aggregate_sum();
  for (int suite = 0; suite < 3; ++suite) {
    flipgame::ValueGraph vg(flipgame::GameMode::Basic);
    UpdateSequence seq =
        suite == 0 ? gadget.seq : random_seq(2, 256, 4000, 6000 + suite, 0.3, 0.1, 0.1);
    for (const auto& op : seq.ops) vg.game_op(op, agg);
    for (auto& [d, c] : vg.metrics().flip_distance_hist) game_maxd = std::max(game_maxd, d);
  }
  require(game_maxd <= 1, "a game flip left the operated vertex's edges");
  return "BF: f=" + std::to_string(m.metrics().f) + ", max dist " + std::to_string(maxd) +
         "; game flips all at distance <= 1";
}

// ------------------------------------------------------------- criterion 8

std::string matching_correctness() {
  // streaming maximality on both engines
  for (auto engine : {apps::MatchEngine::Orientation, apps::MatchEngine::FlipGame}) {
    apps::MatchConfig cfg;
    cfg.engine = engine;
    cfg.delta = 8;
    cfg.threshold = 5;  // ceil(sqrt(2 * log2 1024))
    apps::MatchingMaintainer mm(cfg);
    auto seq = random_seq(2, 1024, 100000, 7000, 0.3);  // pinned: 10^5 ops
    for (const auto& op : seq.ops) {
      mm.apply(op);
      auto viol = oracles::check_maximal_matching(mm.graph(), mm.matching());
      require(!viol, "matching violation: " + (viol ? viol->reason : ""));
    }
  }

  // amortized-work trend for the flipping-game engine
  double calibration = 0;
  std::ostringstream trend;
  for (std::uint32_t lg = 10; lg <= 16; ++lg) {  // pinned range 2^10..2^16
    std::uint32_t n = 1u << lg;
    apps::MatchConfig cfg;
    cfg.engine = apps::MatchEngine::FlipGame;
    cfg.threshold = std::uint32_t(std::ceil(std::sqrt(2.0 * lg)));
    apps::MatchingMaintainer mm(cfg);
    auto seq = random_seq(2, n, 3 * n, 7100 + lg, 0.3);
    mm.apply_all(seq);
    double per_op = double(mm.work()) / double(mm.metrics().t);
    double normalized = per_op / (2.0 + std::sqrt(2.0 * lg));
    if (lg == 10) calibration = normalized;
    // pinned band: [0.1, 10] x the n=2^10 calibration value
    require(normalized >= 0.1 * calibration && normalized <= 10.0 * calibration,
            "work trend left the band at n=2^" + std::to_string(lg));
    trend << (lg > 10 ? " " : "") << std::fixed << normalized;
  }
  return "maximal after every op; normalized work per op: " + trend.str();
}

// ------------------------------------------------------------- criterion 9

std::string adjacency() {
  const std::uint32_t kAlpha = 2;
  const std::uint32_t kN = 1024;
  const std::uint32_t kDeltaPrime = 4 * kAlpha * 10;  // pinned: 4*alpha*log2 n
  const std::uint32_t kDeltaBf = 4 * kAlpha;
  apps::AdjStruct adj(kDeltaPrime);
  auto seq = random_seq(kAlpha, kN, 75000, 8000, 0.25, 0.35);  // ~10^5 mixed ops
  std::set<std::pair<VertexId, VertexId>> reference;
  auto key = [](VertexId a, VertexId b) {
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  std::uint64_t queries = 0;
  for (const auto& op : seq.ops) {
    if (op.kind == OpKind::AdjacencyQuery) {
      bool expect = reference.count(key(op.a, op.b)) > 0;
      require(adj.adjacency_query(op.a, op.b) == expect, "adjacency answer mismatch");
      ++queries;
      continue;
    }
    adj.apply(op);
    if (op.kind == OpKind::InsertEdge || op.kind == OpKind::InsertEdgeDirected)
      reference.insert(key(op.a, op.b));
    if (op.kind == OpKind::DeleteEdge) reference.erase(key(op.a, op.b));
    if (op.kind == OpKind::DeleteVertex)
      for (auto it = reference.begin(); it != reference.end();)
        it = (it->first == op.a || it->second == op.a) ? reference.erase(it) : ++it;
  }

  orient::OrientConfig cfg;
  cfg.delta = kDeltaBf;
  orient::Maintainer bf(orient::Algo::BF, cfg);
  bf.apply_all(seq);
  // threshold-game bound instantiated with the side-by-side BF run
  double bound = double(bf.metrics().t + bf.metrics().f) * (kDeltaPrime + 1) /
                 double(kDeltaPrime + 1 - 2 * kDeltaBf);
  require(double(adj.metrics().f) <= bound,
          "adjacency flips " + std::to_string(adj.metrics().f) + " exceed the game bound");
  return std::to_string(queries) + " queries exact; flips " +
         std::to_string(adj.metrics().f) + " <= bound " + std::to_string(std::uint64_t(bound));
}

// ------------------------------------------------------------ criterion 10

std::string dist_antireset() {
  const std::uint32_t kAlpha = 2;
  const std::uint32_t kDelta = 14;  // pinned: 7*alpha
  std::uint64_t checked = 0;
  for (std::size_t s = 0; s < 50; ++s) {  // pinned run count
    // forest base plus a star from a fresh hub: arboricity stays <= 2 and the
    // 15th hub edge pushes the hub past delta
    auto seq = random_seq(1, 200, 1000, 9000 + s);
    VertexId hub = 5000;
    seq.ops.push_back({OpKind::InsertVertex, hub, 0, 0});
    for (VertexId v = 0; v < 15; ++v)
      seq.ops.push_back({OpKind::InsertEdgeDirected, hub, VertexId(2 + 3 * v), 0});

    distsim::NetConfig cfg;
    cfg.alpha = kAlpha;
    cfg.delta = kDelta;
    distsim::Network net(cfg);
    std::set<std::pair<VertexId, VertexId>> region_edges;  // colored edges, via Explore
    net.trace = [&](std::uint64_t, const distsim::SimMessage& m) {
      if (m.tag == distsim::Tag::Explore) region_edges.insert({m.src, m.dst});
    };
    net.apply_all(seq);
    require(net.cascades().size() == 1, "expected exactly one triggered cascade");
    const auto& c = net.cascades()[0];
    require(c.cascade_rounds <= ceil_log2(c.gu_nodes) + 2,
            "cascade rounds above ceil(log2 |Nu|) + 2 at seed " + std::to_string(9000 + s));
    std::uint64_t cleared = 0;
    for (auto& [gone, left] : c.decay) {
      require(gone >= left, "decay rule broken: fewer edges cleared than remain");
      cleared += gone;
    }
    require(cleared == c.gu_edges, "decay totals disagree with |E(Gu)|");
    require(c.cascade_messages <= 4 * c.gu_edges + 4 * c.gu_nodes,
            "cascade messages above 4|E(Gu)| + 4|Nu|");
    // final ownership of the region's edges stays under the fire threshold
    std::map<VertexId, std::uint32_t> own;
    for (auto& [u, v] : region_edges) own[net.graph().oriented(u, v) ? u : v]++;
    for (auto& [v, deg] : own)
      require(deg <= 5 * kAlpha, "a region vertex owns more than 5*alpha region edges");
    ++checked;
  }
  return std::to_string(checked) + " cascades: rounds, decay, messages, 5a ceilings all held";
}

// ------------------------------------------------------------ criterion 11

std::string dist_memory() {
  // the meter itself aborts past the ceiling at every round boundary; this
  // criterion replays the whole distributed suite and re-checks the recorded
  // peaks plus the representation at every quiescent point
  const std::uint64_t kCeiling = 8 * (14 + 2);  // pinned: 8*(delta+2)
  for (bool matching : {false, true}) {
    distsim::NetConfig cfg;
    cfg.alpha = 2;
    cfg.matching = matching;
    distsim::Network net(cfg);
    auto seq = random_seq(2, 300, 10000, 9500, 0.3);  // pinned: 10^4 updates
    for (const auto& op : seq.ops) {
      net.apply(op);
      net.check_representation();
    }
    net.check_memory();
    require(net.metrics().peak_mem_entries <= kCeiling, "memory peak above 8*(delta+2)");
  }
  return "10^4 updates x {plain, matching}: chains exact, peaks <= 128 entries";
}

// ------------------------------------------------------------ criterion 12

std::string dist_matching_trend() {
  // locked at the first calibration run: msgs/op/(alpha+log2 n) measured
  // 0.3853 at n=2^10 and only decreases with n; rounded up to 0.39, no slack
  const double kLockedC = 0.39;  // pinned
  const std::uint32_t kAlpha = 2;
  std::ostringstream seen;
  for (std::uint32_t lg = 10; lg <= 14; ++lg) {  // pinned range
    std::uint32_t n = 1u << lg;
    distsim::NetConfig cfg;
    cfg.alpha = kAlpha;
    cfg.matching = true;
    distsim::Network net(cfg);
    auto seq = random_seq(kAlpha, n, 2 * n, 9600 + lg, 0.3);
    net.apply_all(seq);
    double per_op = double(net.metrics().messages) / double(net.metrics().t);
    double c = per_op / (kAlpha + lg);
    require(c <= kLockedC, "messages/op/(alpha+log2 n) = " + std::to_string(c) +
                               " above the locked constant at n=2^" + std::to_string(lg));
    seen << (lg > 10 ? " " : "") << std::fixed << c;
  }
  return "msgs/op normalized: " + seen.str() + " (locked c = 0.39)";
}

// ------------------------------------------------------------ criterion 13

std::string oracle_consistency() {
  std::uint64_t graphs = 0, nonempty = 0;
  for (std::size_t s = 0; s < 500; ++s) {  // pinned corpus size
    auto seq = random_seq(1 + s % 3, 10, 25, 10000 + s, 0.3);
    OrientedGraph g;
    Metrics m;
    Recorder rec(g, m);
    for (const auto& op : seq.ops) apply_raw(g, op, InsertRule::ArbitraryFixed, rec);
    ++graphs;
    if (g.n_live() < 2 || g.n_edges() == 0) continue;
    ++nonempty;
    auto arb = oracles::arboricity_bruteforce(g);
    auto mmo = oracles::min_max_outdegree(g);
    require(mmo.delta_star <= arb.alpha, "pseudoarboricity above arboricity");
    mmo.orientation.check_invariants();
    std::uint32_t maxd = 0;
    for (VertexId v : mmo.orientation.live_vertices())
      maxd = std::max(maxd, mmo.orientation.outdeg(v));
    require(maxd == mmo.delta_star, "witness does not achieve delta*");

    // no algorithm may succeed below delta*: replaying at delta*-1 must abort,
    // and a successful run pins config delta >= delta*
    if (mmo.delta_star > 1) {
      orient::OrientConfig cfg;
      cfg.delta = mmo.delta_star - 1;
      cfg.watchdog_factor = 50;
      orient::Maintainer bf(orient::Algo::BF, cfg);
      bool succeeded = true;
      try {
        bf.apply_all(seq);
      } catch (const InvariantError&) {
        succeeded = false;
      }
      require(!succeeded, "BF claimed success below the oracle's delta*");
    }
    orient::OrientConfig ok;
    ok.delta = mmo.delta_star + 1;
    orient::Maintainer bf2(orient::Algo::BF, ok);
    bf2.apply_all(seq);  // must terminate; watchdog would throw otherwise
  }
  return std::to_string(nonempty) + "/" + std::to_string(graphs) +
         " non-trivial graphs consistent";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_only = std::atoi(argv[1]);
  criterion(1, "forest safety", forest_safety);
  criterion(2, "blowup reproduction", blowup_reproduction);
  criterion(3, "largest-first upper bound", largest_first_upper);
  criterion(3, "largest-first lower bound", largest_first_lower);
  criterion(4, "anti-reset ceilings", antireset_ceilings);
  criterion(5, "game competitiveness", game_competitiveness);
  criterion(6, "game token bounds", game_token_bounds);
  criterion(7, "locality", locality);
  criterion(8, "matching correctness", matching_correctness);
  criterion(9, "adjacency", adjacency);
  criterion(10, "distributed anti-reset", dist_antireset);
  criterion(11, "distributed memory", dist_memory);
  criterion(12, "distributed matching trend", dist_matching_trend);
  criterion(13, "oracle self-consistency", oracle_consistency);
  if (g_failed) {
    std::printf("%d criterion(s) FAILED\n", g_failed);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
