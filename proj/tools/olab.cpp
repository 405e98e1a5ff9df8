// Command-line front end. Talks to the library exclusively through the C
// API in orientlab.h; all engine logic lives behind that boundary.
//
// Exit codes: 0 success, 2 usage error, 3 algorithm abort, 4 verification
// failure (matching the ol_status values).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orientlab.h"

using json = nlohmann::ordered_json;

namespace {

struct SeqDeleter {
  void operator()(ol_seq* s) const { ol_seq_destroy(s); }
};
using SeqPtr = std::unique_ptr<ol_seq, SeqDeleter>;

struct StrDeleter {
  void operator()(char* s) const { ol_free(s); }
};
using StrPtr = std::unique_ptr<char, StrDeleter>;

[[noreturn]] void die(ol_status st) {
  std::cerr << "error: " << ol_last_error() << "\n";
  std::exit(int(st));
}

/// Common sequence source: either a file or a generator spec.
struct SeqSource {
  std::string file;
  std::string gen;          // generator kind
  std::string params;       // generator params JSON
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seq", file, "update sequence file");
    cmd->add_option("--gen", gen, "generator kind (random|blowup|farflip|gi|gialpha)");
    cmd->add_option("--params", params, "generator params as JSON");
    cmd->add_option("--seed", seed, "seed for generator-backed runs");
  }

  SeqPtr resolve() const {
    ol_seq* raw = nullptr;
    if (!file.empty() && !gen.empty()) {
      std::cerr << "error: --seq and --gen are mutually exclusive\n";
      std::exit(2);
    }
    if (!file.empty()) {
      if (ol_status st = ol_seq_load(file.c_str(), &raw); st != OL_OK) die(st);
      return SeqPtr(raw);
    }
    if (gen.empty()) {
      std::cerr << "error: one of --seq or --gen is required\n";
      std::exit(2);
    }
    json p = params.empty() ? json::object() : json::parse(params, nullptr, false);
    if (p.is_discarded()) {
      std::cerr << "error: --params is not valid JSON\n";
      std::exit(2);
    }
    if (gen == "random") {
      if (!seed) {
        std::cerr << "error: --seed is mandatory for generator-backed runs\n";
        std::exit(2);
      }
      p["seed"] = *seed;
    }
    if (ol_status st = ol_seq_generate(gen.c_str(), p.dump().c_str(), &raw, nullptr);
        st != OL_OK)
      die(st);
    return SeqPtr(raw);
  }
};

json run_json(const ol_seq* seq, const json& cfg) {
  char* out = nullptr;
  if (ol_status st = ol_run(seq, cfg.dump().c_str(), &out); st != OL_OK) die(st);
  StrPtr guard(out);
  return json::parse(out);
}

json sim_json(const ol_seq* seq, const json& cfg) {
  char* out = nullptr;
  if (ol_status st = ol_sim_run(seq, cfg.dump().c_str(), &out); st != OL_OK) die(st);
  StrPtr guard(out);
  return json::parse(out);
}

SeqPtr generate(const std::string& kind, const json& params, json* meta = nullptr) {
  ol_seq* raw = nullptr;
  char* m = nullptr;
  if (ol_status st = ol_seq_generate(kind.c_str(), params.dump().c_str(), &raw,
                                     meta ? &m : nullptr);
      st != OL_OK)
    die(st);
  if (meta) {
    *meta = json::parse(m);
    ol_free(m);
  }
  return SeqPtr(raw);
}

// ------------------------------------------------------------------ bench

struct BenchRow {
  std::size_t n = 0;
  std::uint64_t t = 0;
  std::string algo;
  double f_per_t = 0, c_per_op = 0, rounds_per_op = 0, msgs_per_op = 0;
  std::uint64_t peak_outdeg = 0;
};

void write_bench(const std::vector<BenchRow>& rows, const std::string& csv_path,
                 const std::string& plot_path, const std::string& y_label) {
  std::ostream* csv = &std::cout;
  std::ofstream csv_file;
  if (!csv_path.empty()) {
    csv_file.open(csv_path);
    csv = &csv_file;
  }
  *csv << "n,t,algo,f_per_t,c_per_op,peak_outdeg,rounds_per_op,msgs_per_op\n";
  for (const auto& r : rows)
    *csv << r.n << "," << r.t << "," << r.algo << "," << r.f_per_t << "," << r.c_per_op
         << "," << r.peak_outdeg << "," << r.rounds_per_op << "," << r.msgs_per_op << "\n";
  if (!plot_path.empty()) {
    std::ofstream plot(plot_path);
    plot << "# x=n y=" << y_label << "\n";
    for (const auto& r : rows) {
      double y = y_label == "f_per_t"      ? r.f_per_t
                 : y_label == "c_per_op"   ? r.c_per_op
                 : y_label == "msgs_per_op" ? r.msgs_per_op
                                            : double(r.peak_outdeg);
      plot << r.n << " " << y << "\n";
    }
  }
}

int run_suite(const std::string& suite, const std::string& csv_path,
              const std::string& plot_path, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  if (suite == "scaling-bf") {
    for (std::uint32_t p = 10; p <= 16; ++p) {
      std::uint32_t n = 1u << p;
      std::uint64_t t = 4ull * n;
      json params{{"alpha", 1}, {"n", n}, {"t", t}, {"seed", seed + p},
                  {"delete_fraction", 0.3}};
      SeqPtr seq = generate("random", params);
      json m = run_json(seq.get(), json{{"algo", "bf"}, {"delta", 4}});
      BenchRow r;
      r.n = n;
      r.t = m["t"].get<std::uint64_t>();
      r.algo = "bf";
      r.f_per_t = double(m["f"].get<std::uint64_t>()) / double(std::max<std::uint64_t>(r.t, 1));
      r.peak_outdeg = m["peak_outdeg"].get<std::uint64_t>();
      rows.push_back(r);
    }
    write_bench(rows, csv_path, plot_path, "f_per_t");
    return 0;
  }
  if (suite == "competitive") {
    for (int k = 0; k < 10; ++k) {
      std::uint32_t n = 1u << 10;
      std::uint64_t t = 5000;
      json params{{"alpha", 2},        {"n", n},
                  {"t", t},            {"seed", seed + std::uint64_t(k)},
                  {"delete_fraction", 0.2}, {"query_fraction", 0.2},
                  {"value_fraction", 0.2}};
      SeqPtr seq = generate("random", params);
      json game = run_json(seq.get(), json{{"algo", "flipgame"}});
      json comp = run_json(seq.get(), json{{"algo", "bf-member"}, {"delta", 8}, {"alpha", 2}});
      double c_r = game["ledger"]["c"].get<double>();
      double c_a = comp["ledger"]["c"].get<double>();
      BenchRow r;
      r.n = n;
      r.t = game["t"].get<std::uint64_t>();
      r.algo = "flipgame";
      r.c_per_op = c_a > 0 ? c_r / c_a : 0;  // the competitive ratio column
      r.f_per_t = double(game["f"].get<std::uint64_t>()) / double(std::max<std::uint64_t>(r.t, 1));
      r.peak_outdeg = game["peak_outdeg"].get<std::uint64_t>();
      rows.push_back(r);
    }
    write_bench(rows, csv_path, plot_path, "c_per_op");
    return 0;
  }
  if (suite == "matching") {
    for (std::uint32_t p = 10; p <= 14; ++p) {
      std::uint32_t n = 1u << p;
      json params{{"alpha", 2}, {"n", n}, {"t", 4ull * n}, {"seed", seed + p},
                  {"delete_fraction", 0.3}};
      SeqPtr seq = generate("random", params);
      json m = run_json(seq.get(), json{{"algo", "matching-flipgame"}, {"threshold", 8}});
      BenchRow r;
      r.n = n;
      r.t = m["t"].get<std::uint64_t>();
      r.algo = "matching-flipgame";
      r.c_per_op = double(m["work"].get<std::uint64_t>()) / double(std::max<std::uint64_t>(r.t, 1));
      r.peak_outdeg = m["peak_outdeg"].get<std::uint64_t>();
      rows.push_back(r);
    }
    write_bench(rows, csv_path, plot_path, "c_per_op");
    return 0;
  }
  if (suite == "dist-matching") {
    for (std::uint32_t p = 8; p <= 11; ++p) {
      std::uint32_t n = 1u << p;
      json params{{"alpha", 2}, {"n", n}, {"t", 2ull * n}, {"seed", seed + p},
                  {"delete_fraction", 0.2}};
      SeqPtr seq = generate("random", params);
      json m = sim_json(seq.get(),
                        json{{"engine", "matching-dist"}, {"alpha", 2}, {"delta", 14}});
      BenchRow r;
      r.n = n;
      r.t = m["metrics"]["t"].get<std::uint64_t>();
      r.algo = "matching-dist";
      std::uint64_t ops = std::max<std::uint64_t>(r.t, 1);
      r.rounds_per_op = double(m["metrics"]["rounds"].get<std::uint64_t>()) / double(ops);
      r.msgs_per_op = double(m["metrics"]["messages"].get<std::uint64_t>()) / double(ops);
      r.peak_outdeg = m["metrics"]["peak_outdeg"].get<std::uint64_t>();
      rows.push_back(r);
    }
    write_bench(rows, csv_path, plot_path, "msgs_per_op");
    return 0;
  }
  std::cerr << "error: unknown suite '" << suite << "'\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orientation laboratory"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "replay a sequence under one engine");
  SeqSource run_src;
  run_src.attach(run);
  std::string algo = "bf", order = "fifo", rule = "arbitrary", stream_path, out_path;
  std::uint32_t delta = 4, alpha = 1, delta_prime = 0;
  bool track_dist = false;
  run->add_option("--algo", algo,
                  "bf|bf-largest|antireset|bf-member|flipgame|flipgame-threshold|"
                  "matching-local|matching-flipgame|adjacency");
  run->add_option("--delta", delta, "outdegree threshold");
  run->add_option("--alpha", alpha, "promised arboricity");
  std::optional<std::uint32_t> dp_opt;
  run->add_option("--delta-prime", dp_opt, "game threshold (flipgame-threshold/adjacency)");
  run->add_option("--order", order, "cascade order: fifo|lifo|largest");
  run->add_option("--rule", rule, "insert rule: arbitrary|higher|directive");
  run->add_flag("--track-flip-distance", track_dist, "record the flip distance histogram");
  run->add_option("--stream-metrics", stream_path, "per-op metrics JSONL file");
  run->add_option("--out", out_path, "write the metrics JSON here instead of stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "oracle checks over a sequence");
  SeqSource verify_src;
  verify_src.attach(verify);
  std::vector<std::string> checks;
  std::uint32_t v_delta = 4, v_alpha = 2;
  bool forest_naive = false;
  verify->add_option("--checks", checks,
                     "arboricity|minmaxoutdeg|matching|forests|representation")
      ->required();
  verify->add_option("--delta", v_delta, "engine threshold where a check needs one");
  verify->add_option("--alpha", v_alpha, "arboricity for the representation check");
  verify->add_flag("--forest-naive", forest_naive,
                   "skip cycle peeling in the forest check (failure demo)");

  // gadget
  auto* gadget = app.add_subcommand("gadget", "emit a generator sequence to a file");
  std::string g_kind, g_params, g_out, g_meta;
  std::optional<std::uint64_t> g_seed;
  gadget->add_option("kind", g_kind, "random|blowup|farflip|gi|gialpha")->required();
  gadget->add_option("--params", g_params, "params JSON");
  gadget->add_option("--seed", g_seed, "seed (mandatory for random)");
  gadget->add_option("--out", g_out, "sequence file to write")->required();
  gadget->add_option("--meta", g_meta, "write gadget metadata JSON here");

  // sim
  auto* sim = app.add_subcommand("sim", "distributed synchronous replay");
  SeqSource sim_src;
  sim_src.attach(sim);
  std::string engine = "antireset-dist", trace_path, sim_out;
  std::uint32_t s_delta = 14, s_alpha = 2;
  std::uint64_t round_limit = 100000;
  sim->add_option("--engine", engine, "antireset-dist|matching-dist");
  sim->add_option("--delta", s_delta, "outdegree threshold");
  sim->add_option("--alpha", s_alpha, "promised arboricity");
  sim->add_option("--round-limit", round_limit, "abort after this many rounds per op");
  sim->add_option("--trace", trace_path, "message trace JSONL file");
  sim->add_option("--out", sim_out, "write the report JSON here instead of stdout");

  // bench
  auto* bench = app.add_subcommand("bench", "canned measurement suites");
  std::string suite, csv_path, plot_path;
  std::uint64_t b_seed = 1;
  bench->add_option("suite", suite, "scaling-bf|competitive|matching|dist-matching")
      ->required();
  bench->add_option("--out", csv_path, "CSV output path (default stdout)");
  bench->add_option("--plot-data", plot_path, "x/y series file for external plotting");
  bench->add_option("--seed", b_seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    SeqPtr seq = run_src.resolve();
    json cfg{{"algo", algo}, {"delta", delta}, {"alpha", alpha},
             {"order", order}, {"rule", rule}};
    if (dp_opt) {
      if (algo != "flipgame-threshold" && algo != "adjacency") {
        std::cerr << "error: --delta-prime only applies to flipgame-threshold/adjacency\n";
        return 2;
      }
      cfg["delta_prime"] = *dp_opt;
    }
    if (track_dist) cfg["track_flip_distance"] = true;
    if (!stream_path.empty()) cfg["stream_path"] = stream_path;
    char* out = nullptr;
    if (ol_status st = ol_run(seq.get(), cfg.dump().c_str(), &out); st != OL_OK) {
      std::cerr << "error: " << ol_last_error() << "\n";
      return int(st);
    }
    StrPtr guard(out);
    if (out_path.empty()) {
      std::cout << out << "\n";
    } else {
      std::ofstream f(out_path);
      f << out << "\n";
    }
    return 0;
  }

  if (verify->parsed()) {
    SeqPtr seq = verify_src.resolve();
    json cfg{{"checks", checks}, {"delta", v_delta}, {"alpha", v_alpha}};
    if (forest_naive) cfg["forest_naive"] = true;
    char* out = nullptr;
    ol_status st = ol_verify(seq.get(), cfg.dump().c_str(), &out);
    if (out) {
      std::cout << out << "\n";
      ol_free(out);
    }
    if (st != OL_OK && st != OL_EVERIFY) std::cerr << "error: " << ol_last_error() << "\n";
    return int(st);
  }

  if (gadget->parsed()) {
    json p = g_params.empty() ? json::object() : json::parse(g_params, nullptr, false);
    if (p.is_discarded()) {
      std::cerr << "error: --params is not valid JSON\n";
      return 2;
    }
    if (g_kind == "random") {
      if (!g_seed) {
        std::cerr << "error: --seed is mandatory for the random generator\n";
        return 2;
      }
      p["seed"] = *g_seed;
    }
    json meta;
    SeqPtr seq = generate(g_kind, p, &meta);
    if (ol_status st = ol_seq_save(seq.get(), g_out.c_str()); st != OL_OK) {
      std::cerr << "error: " << ol_last_error() << "\n";
      return int(st);
    }
    if (!g_meta.empty()) {
      std::ofstream f(g_meta);
      f << meta.dump(2) << "\n";
    } else {
      std::cout << meta.dump(2) << "\n";
    }
    return 0;
  }

  if (sim->parsed()) {
    SeqPtr seq = sim_src.resolve();
    json cfg{{"engine", engine}, {"delta", s_delta}, {"alpha", s_alpha},
             {"round_limit", round_limit}};
    if (!trace_path.empty()) cfg["trace_path"] = trace_path;
    char* out = nullptr;
    if (ol_status st = ol_sim_run(seq.get(), cfg.dump().c_str(), &out); st != OL_OK) {
      std::cerr << "error: " << ol_last_error() << "\n";
      return int(st);
    }
    StrPtr guard(out);
    if (sim_out.empty()) {
      std::cout << out << "\n";
    } else {
      std::ofstream f(sim_out);
      f << out << "\n";
    }
    return 0;
  }

  if (bench->parsed()) return run_suite(suite, csv_path, plot_path, b_seed);

  return 2;
}
