#include "orientlab.h"

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "orientlab/apps.hpp"
#include "orientlab/core.hpp"
#include "orientlab/distsim.hpp"
#include "orientlab/flipgame.hpp"
#include "orientlab/generators.hpp"
#include "orientlab/oracles.hpp"
#include "orientlab/orient.hpp"

using json = nlohmann::ordered_json;
using namespace orientlab;

struct ol_seq {
  UpdateSequence seq;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ol_status fail(ol_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

/// Runs `body`; maps parse/config errors to OL_EINVAL and runtime aborts
/// (rejected ops, broken invariants) to OL_EABORT.
template <typename F>
ol_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const json::exception& e) {
    return fail(OL_EINVAL, std::string("bad config: ") + e.what());
  } catch (const OpError& e) {
    return fail(OL_EABORT, e.what());
  } catch (const InvariantError& e) {
    return fail(OL_EABORT, std::string("invariant: ") + e.what());
  } catch (const std::exception& e) {
    return fail(OL_EABORT, e.what());
  }
}

orient::CascadeOrder parse_order(const std::string& s) {
  if (s == "fifo") return orient::CascadeOrder::FIFO;
  if (s == "lifo") return orient::CascadeOrder::LIFO;
  if (s == "largest") return orient::CascadeOrder::LargestFirst;
  throw OpError("unknown cascade order '" + s + "'");
}

InsertRule parse_rule(const std::string& s) {
  if (s == "arbitrary") return InsertRule::ArbitraryFixed;
  if (s == "higher") return InsertRule::HigherOutdegree;
  if (s == "directive") return InsertRule::Directive;
  throw OpError("unknown insert rule '" + s + "'");
}

json metrics_json(const Metrics& m) { return json::parse(m.to_json()); }

json ledger_json(const flipgame::CostLedger& led) {
  return json{{"c", led.c()},
              {"f_cost", led.f_cost},
              {"free_flips", led.free_flips},
              {"outdeg_charges", led.outdeg_charges},
              {"r", led.resets}};
}

/// Per-op metric streaming shared by all centralized engines.
struct MetricStream {
  std::ofstream out;
  explicit MetricStream(const json& cfg) {
    if (cfg.contains("stream_path")) {
      out.open(cfg["stream_path"].get<std::string>());
      if (!out) throw OpError("cannot open stream file");
    }
  }
  void emit(const Metrics& m) {
    if (out.is_open()) out << m.to_json() << "\n";
  }
};

const char* tag_name(distsim::Tag t) {
  switch (t) {
    case distsim::Tag::Degree: return "degree";
    case distsim::Tag::Join: return "join";
    case distsim::Tag::JoinAck: return "join_ack";
    case distsim::Tag::SibLeft: return "sib_left";
    case distsim::Tag::SibRight: return "sib_right";
    case distsim::Tag::FreeLeft: return "free_left";
    case distsim::Tag::FreeRight: return "free_right";
    case distsim::Tag::Leave: return "leave";
    case distsim::Tag::LeaveFree: return "leave_free";
    case distsim::Tag::Explore: return "explore";
    case distsim::Tag::ExploreAck: return "explore_ack";
    case distsim::Tag::Countdown: return "countdown";
    case distsim::Tag::Cascade: return "cascade";
    case distsim::Tag::CascadeFree: return "cascade_free";
    case distsim::Tag::Status: return "status";
    case distsim::Tag::Probe: return "probe";
    case distsim::Tag::ProbeReply: return "probe_reply";
    case distsim::Tag::Propose: return "propose";
    case distsim::Tag::Accept: return "accept";
    case distsim::Tag::Match: return "match";
  }
  return "?";
}

distsim::NetConfig parse_sim_config(const json& cfg) {
  distsim::NetConfig nc;
  nc.alpha = cfg.value("alpha", nc.alpha);
  nc.delta = cfg.value("delta", 7 * nc.alpha);
  nc.round_limit = cfg.value("round_limit", nc.round_limit);
  std::string engine = cfg.value("engine", "antireset-dist");
  if (engine == "matching-dist")
    nc.matching = true;
  else if (engine != "antireset-dist")
    throw OpError("unknown engine '" + engine + "'");
  return nc;
}

json run_network(const UpdateSequence& seq, const json& cfg, distsim::Network& net) {
  std::ofstream trace_out;
  if (cfg.contains("trace_path")) {
    trace_out.open(cfg["trace_path"].get<std::string>());
    if (!trace_out) throw OpError("cannot open trace file");
    net.trace = [&](std::uint64_t round, const distsim::SimMessage& msg) {
      json line{{"round", round},
                {"src", msg.src},
                {"dst", msg.dst},
                {"tag", tag_name(msg.tag)},
                {"payload", msg.payload}};
      trace_out << line.dump() << "\n";
    };
  }
  net.apply_all(seq);
  json rep;
  rep["metrics"] = metrics_json(net.metrics());
  rep["rounds_total"] = net.round();
  json cascades = json::array();
  for (const auto& c : net.cascades()) {
    json decay = json::array();
    for (auto& [gone, left] : c.decay) decay.push_back({gone, left});
    cascades.push_back({{"trigger", c.trigger},
                        {"gu_nodes", c.gu_nodes},
                        {"gu_edges", c.gu_edges},
                        {"cascade_rounds", c.cascade_rounds},
                        {"cascade_messages", c.cascade_messages},
                        {"decay", decay}});
  }
  rep["cascades"] = cascades;
  if (net.config().matching) rep["matching_size"] = net.matching().size();
  return rep;
}

/// Replay only the raw structural ops; the reference graph for oracles.
OrientedGraph replay_raw(const UpdateSequence& seq, InsertRule rule) {
  OrientedGraph g;
  Metrics m;
  Recorder rec(g, m);
  std::size_t i = 0;
  for (const auto& op : seq.ops) {
    if (op.kind != OpKind::AdjacencyQuery && op.kind != OpKind::SetValue)
      apply_raw(g, op, rule, rec, i);
    ++i;
  }
  return g;
}

json do_run(const UpdateSequence& seq, const json& cfg) {
  std::string algo = cfg.value("algo", "bf");
  InsertRule rule = parse_rule(cfg.value("rule", "arbitrary"));
  MetricStream stream(cfg);

  if (algo == "bf" || algo == "bf-largest" || algo == "antireset") {
    orient::OrientConfig oc;
    oc.delta = cfg.value("delta", oc.delta);
    oc.alpha = cfg.value("alpha", oc.alpha);
    oc.order = parse_order(cfg.value("order", "fifo"));
    oc.rule = rule;
    oc.track_flip_distance = cfg.value("track_flip_distance", false);
    oc.track_vertex_peaks = cfg.value("track_vertex_peaks", false);
    orient::Algo a = algo == "bf"           ? orient::Algo::BF
                     : algo == "bf-largest" ? orient::Algo::BFLargest
                                            : orient::Algo::AntiReset;
    orient::Maintainer m(a, oc);
    for (const auto& op : seq.ops) {
      m.apply(op);
      stream.emit(m.metrics());
    }
    return metrics_json(m.metrics());
  }

  if (algo == "flipgame" || algo == "flipgame-threshold") {
    auto mode = algo == "flipgame" ? flipgame::GameMode::Basic : flipgame::GameMode::Threshold;
    flipgame::ValueGraph vg(mode, cfg.value("delta_prime", 0u), rule);
    auto agg = flipgame::aggregate_sum();
    for (const auto& op : seq.ops) {
      vg.game_op(op, agg);
      stream.emit(vg.metrics());
    }
    json out = metrics_json(vg.metrics());
    out["ledger"] = ledger_json(vg.ledger());
    return out;
  }

  if (algo == "bf-member") {
    // BF costed as a member of the caching family; the competitor in
    // competitive-ratio comparisons
    orient::OrientConfig oc;
    oc.delta = cfg.value("delta", oc.delta);
    oc.alpha = cfg.value("alpha", oc.alpha);
    oc.rule = rule;
    flipgame::BfMember bm(oc);
    for (const auto& op : seq.ops) {
      bm.apply(op);
      stream.emit(bm.metrics());
    }
    json out = metrics_json(bm.metrics());
    out["ledger"] = ledger_json(bm.ledger());
    return out;
  }

  if (algo == "matching-local" || algo == "matching-flipgame") {
    apps::MatchConfig mc;
    mc.engine = algo == "matching-local" ? apps::MatchEngine::Orientation
                                         : apps::MatchEngine::FlipGame;
    mc.delta = cfg.value("delta", mc.delta);
    mc.threshold = cfg.value("threshold", cfg.value("delta", mc.threshold));
    mc.rule = rule;
    apps::MatchingMaintainer mm(mc);
    for (const auto& op : seq.ops) {
      mm.apply(op);
      stream.emit(mm.metrics());
    }
    json out = metrics_json(mm.metrics());
    out["matching_size"] = mm.matching().size();
    out["work"] = mm.work();
    return out;
  }

  if (algo == "adjacency") {
    std::uint32_t dp = cfg.value("delta_prime", 8u);
    apps::AdjStruct adj(dp, rule);
    std::uint64_t queries = 0, positives = 0;
    for (const auto& op : seq.ops) {
      if (op.kind == OpKind::AdjacencyQuery) {
        ++queries;
        if (adj.adjacency_query(op.a, op.b)) ++positives;
      } else {
        adj.apply(op);
      }
      stream.emit(adj.metrics());
    }
    json out = metrics_json(adj.metrics());
    out["ledger"] = ledger_json(adj.ledger());
    out["queries"] = queries;
    out["positive_answers"] = positives;
    return out;
  }

  throw OpError("unknown algo '" + algo + "'");
}

json do_verify(const UpdateSequence& seq, const json& cfg, bool& all_pass) {
  std::vector<std::string> checks = cfg.value("checks", std::vector<std::string>{});
  if (checks.empty())
    throw OpError("no checks requested");
  InsertRule rule = parse_rule(cfg.value("rule", "arbitrary"));
  json out = json::array();
  all_pass = true;
  auto record = [&](const std::string& name, const std::string& status, json detail) {
    out.push_back({{"name", name}, {"status", status}, {"detail", std::move(detail)}});
    if (status == "fail") all_pass = false;
  };

  for (const auto& check : checks) {
    if (check == "arboricity") {
      OrientedGraph g = replay_raw(seq, rule);
      std::size_t limit = cfg.value("oracle_max_n", 20u);
      if (g.n_live() > limit) {
        record(check, "skip", {{"reason", "graph too large for the exact oracle"},
                               {"n", g.n_live()}});
        continue;
      }
      auto r = oracles::arboricity_bruteforce(g, limit);
      record(check, "pass",
             {{"alpha", r.alpha},
              {"witness_size", r.witness.subset.size()},
              {"witness_edges", r.witness.edges_inside}});
    } else if (check == "minmaxoutdeg") {
      OrientedGraph g = replay_raw(seq, rule);
      auto r = oracles::min_max_outdegree(g);
      std::uint32_t peak = 0;
      for (VertexId v : r.orientation.live_vertices())
        peak = std::max(peak, r.orientation.outdeg(v));
      if (peak != r.delta_star) {
        record(check, "fail", {{"reason", "witness peak disagrees"},
                               {"delta_star", r.delta_star},
                               {"witness_peak", peak}});
      } else {
        record(check, "pass", {{"delta_star", r.delta_star}});
      }
    } else if (check == "matching") {
      apps::MatchConfig mc;
      mc.delta = cfg.value("delta", mc.delta);
      mc.rule = rule;
      apps::MatchingMaintainer mm(mc);
      mm.apply_all(seq);
      auto viol = oracles::check_maximal_matching(mm.graph(), mm.matching());
      if (viol) {
        record(check, "fail",
               {{"reason", viol->reason}, {"a", viol->a}, {"b", viol->b}});
      } else {
        record(check, "pass", {{"matching_size", mm.matching().size()}});
      }
    } else if (check == "forests") {
      OrientedGraph g = replay_raw(seq, rule);
      std::uint32_t peak = 0;
      for (VertexId v : g.live_vertices()) peak = std::max(peak, g.outdeg(v));
      apps::ForestAssignment assignment;
      if (cfg.value("forest_naive", false)) {
        // everything in one class; exists to exercise the oracle's cycle finder
        for (VertexId v : g.live_vertices())
          for (VertexId h : g.out(v)) assignment.emplace_back(std::make_pair(v, h), 0);
      } else {
        assignment = apps::forest_decompose(g, cfg.value("forest_delta", peak));
      }
      auto viol = oracles::check_forest_decomposition(g, assignment);
      if (viol) {
        record(check, "fail",
               {{"forest", viol->forest}, {"a", viol->a}, {"b", viol->b}});
      } else {
        std::set<std::size_t> classes;
        for (auto& [e, c] : assignment) classes.insert(c);
        record(check, "pass", {{"classes", classes.size()}});
      }
    } else if (check == "representation") {
      distsim::Network net(parse_sim_config(cfg));
      net.apply_all(seq);
      try {
        net.check_representation();
        net.check_memory();
        record(check, "pass", {{"rounds", net.round()}});
      } catch (const InvariantError& e) {
        record(check, "fail", {{"reason", e.what()}});
      }
    } else {
      throw OpError("unknown check '" + check + "'");
    }
  }
  return out;
}

json do_generate(const std::string& kind, const json& p, UpdateSequence& seq) {
  if (kind == "random") {
    gen::RandomParams rp;
    rp.alpha = p.value("alpha", rp.alpha);
    rp.n = p.value("n", rp.n);
    rp.t = p.value("t", rp.t);
    rp.seed = p.value("seed", rp.seed);
    rp.delete_fraction = p.value("delete_fraction", rp.delete_fraction);
    rp.query_fraction = p.value("query_fraction", rp.query_fraction);
    rp.value_fraction = p.value("value_fraction", rp.value_fraction);
    seq = gen::gen_random(rp);
    return json{{"kind", kind}, {"n", rp.n}, {"t", rp.t}, {"seed", rp.seed}};
  }
  if (kind == "blowup") {
    auto g = gen::gen_blowup_tree(p.value("delta", 3u), p.value("h", 7u));
    seq = std::move(g.seq);
    return json{{"kind", kind}, {"root", g.root}, {"vstar", g.vstar}, {"n", g.n}};
  }
  if (kind == "farflip") {
    auto g = gen::gen_farflip_chain(p.value("n", 64u));
    seq = std::move(g.seq);
    return json{{"kind", kind},
                {"u", g.u},
                {"v", g.v},
                {"tree_height", g.tree_height},
                {"n", g.n}};
  }
  if (kind == "gi") {
    auto g = gen::gen_gi(p.value("i", 8u));
    seq = std::move(g.seq);
    return json{{"kind", kind},
                {"c1", g.c1},
                {"a", g.a},
                {"b", g.b},
                {"trigger_tail", g.trigger_tail},
                {"n_core", g.n_core}};
  }
  if (kind == "gialpha") {
    auto g = gen::gen_gi_alpha(p.value("i", 4u), p.value("alpha", 2u));
    seq = std::move(g.seq);
    return json{{"kind", kind},
                {"trigger_tail", g.trigger_tail},
                {"alpha", g.alpha},
                {"n", g.n},
                {"s_groups", g.s_groups}};
  }
  throw OpError("unknown generator '" + kind + "'");
}

}  // namespace

extern "C" {

const char* ol_last_error(void) { return g_last_error.c_str(); }

void ol_free(char* s) { std::free(s); }

ol_status ol_seq_from_text(const char* text, ol_seq** out) {
  if (!text || !out) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    try {
      auto s = std::make_unique<ol_seq>();
      s->seq = UpdateSequence::from_text(text);
      *out = s.release();
      return OL_OK;
    } catch (const OpError& e) {
      return fail(OL_EINVAL, e.what());
    }
  });
}

ol_status ol_seq_load(const char* path, ol_seq** out) {
  if (!path || !out) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    try {
      auto s = std::make_unique<ol_seq>();
      s->seq = UpdateSequence::load(path);
      *out = s.release();
      return OL_OK;
    } catch (const OpError& e) {
      return fail(OL_EINVAL, e.what());
    }
  });
}

ol_status ol_seq_to_text(const ol_seq* seq, char** out) {
  if (!seq || !out) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    *out = dup_string(seq->seq.to_text());
    return OL_OK;
  });
}

ol_status ol_seq_save(const ol_seq* seq, const char* path) {
  if (!seq || !path) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    seq->seq.save(path);
    return OL_OK;
  });
}

size_t ol_seq_size(const ol_seq* seq) { return seq ? seq->seq.ops.size() : 0; }

void ol_seq_destroy(ol_seq* seq) { delete seq; }

ol_status ol_seq_generate(const char* kind, const char* params_json, ol_seq** out,
                          char** meta_json) {
  if (!kind || !out) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    json p = params_json && *params_json ? json::parse(params_json) : json::object();
    auto s = std::make_unique<ol_seq>();
    json meta;
    try {
      meta = do_generate(kind, p, s->seq);
    } catch (const OpError& e) {
      return fail(OL_EINVAL, e.what());
    }
    if (meta_json) *meta_json = dup_string(meta.dump());
    *out = s.release();
    return OL_OK;
  });
}

ol_status ol_run(const ol_seq* seq, const char* config_json, char** metrics_json_out) {
  if (!seq || !metrics_json_out) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    json cfg = config_json && *config_json ? json::parse(config_json) : json::object();
    json out;
    try {
      out = do_run(seq->seq, cfg);
    } catch (const OpError& e) {
      // unknown names in the config are usage errors, not run aborts
      std::string w = e.what();
      if (w.rfind("unknown", 0) == 0) return fail(OL_EINVAL, w);
      throw;
    }
    *metrics_json_out = dup_string(out.dump(2));
    return OL_OK;
  });
}

ol_status ol_sim_run(const ol_seq* seq, const char* config_json, char** report_json) {
  if (!seq || !report_json) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    json cfg = config_json && *config_json ? json::parse(config_json) : json::object();
    distsim::NetConfig nc;
    try {
      nc = parse_sim_config(cfg);
    } catch (const OpError& e) {
      std::string w = e.what();
      if (w.rfind("unknown", 0) == 0) return fail(OL_EINVAL, w);
      throw;
    }
    distsim::Network net(nc);
    json rep = run_network(seq->seq, cfg, net);
    net.check_representation();
    net.check_memory();
    *report_json = dup_string(rep.dump(2));
    return OL_OK;
  });
}

ol_status ol_verify(const ol_seq* seq, const char* config_json, char** report_json) {
  if (!seq || !report_json) return fail(OL_EINVAL, "null argument");
  return guarded([&] {
    json cfg = config_json && *config_json ? json::parse(config_json) : json::object();
    bool all_pass = false;
    json checks;
    try {
      checks = do_verify(seq->seq, cfg, all_pass);
    } catch (const OpError& e) {
      std::string w = e.what();
      if (w.rfind("unknown", 0) == 0 || w.rfind("no checks", 0) == 0)
        return fail(OL_EINVAL, w);
      throw;
    }
    json rep{{"ok", all_pass}, {"checks", std::move(checks)}};
    *report_json = dup_string(rep.dump(2));
    if (!all_pass) return fail(OL_EVERIFY, "one or more checks failed");
    return OL_OK;
  });
}

}  // extern "C"
