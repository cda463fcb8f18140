// Command-line harness: run streams, generate synthetic workloads, sweep parameters.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "capvc/cli/generate.hpp"
#include "capvc/cli/run.hpp"
#include "capvc/cli/session.hpp"

using namespace capvc;
using namespace capvc::cli;

namespace {

struct Overrides {
  std::string mode;
  std::optional<double> beta;
  std::optional<double> epsilon;

  void apply(InstanceConfig& cfg) const {
    if (!mode.empty()) {
      auto m = parse_mode(mode);
      if (!m) throw InvalidArgument("unknown mode '" + mode + "'");
      cfg.mode = *m;
    }
    if (beta) cfg.beta = *beta;
    if (epsilon) cfg.epsilon = *epsilon;
  }
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--mode", o.mode, "Capacitated, WeightedVC, SetCover, DemandStatic, DemandCluster or DemandSplit");
  app->add_option("--beta", o.beta, "level base (> 1)");
  app->add_option("--epsilon", o.epsilon, "slack parameter in (0, 1)");
}

SessionOptions session_options(const std::string& verify, bool potential) {
  auto v = parse_verify(verify);
  if (!v) throw InvalidArgument("--verify must be none, invariants or oracle");
  return {*v, potential};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic capacitated vertex cover harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "apply an update stream and print one JSON line per query");
  std::vector<std::string> files;
  std::string out_path, resume_path, verify = "none";
  bool potential = false;
  Overrides run_over;
  run->add_option("files", files, "<instance> <stream>, or just <stream> with --resume")->required()->expected(1, 2);
  run->add_option("--verify", verify, "none, invariants or oracle");
  run->add_flag("--potential", potential, "track the potential and check per-event accounting");
  run->add_option("--out", out_path, "write reports here instead of stdout");
  run->add_option("--resume", resume_path, "continue from a snapshot instead of an instance file");
  add_overrides(run, run_over);

  // generate
  auto* gen = app.add_subcommand("generate", "write a deterministic synthetic stream");
  std::string family, instance_out, gen_out;
  GenParams gp;
  std::uint64_t seed = 1;
  Overrides gen_over;
  gen->add_option("family", family, "erdos-churn, sliding-window, star-adversary or hyper-churn")->required();
  gen->add_option("--n", gp.n, "vertex count");
  gen->add_option("--T", gp.T, "number of updates");
  gen->add_option("--w", gp.w, "window size (sliding-window)");
  gen->add_option("--max-demand", gp.max_demand, "draw insert demands from [1, d]");
  gen->add_option("--f", gp.f, "hyperedge size bound (hyper-churn)");
  gen->add_option("--pool", gp.pool, "hyperedge pool size (hyper-churn)");
  gen->add_option("--query-every", gp.query_every, "emit a query after every k updates");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", gen_out, "stream output path (default stdout)");
  gen->add_option("--instance-out", instance_out, "also write a random instance here");
  add_overrides(gen, gen_over);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run generated cells over seeds and parameters in parallel");
  std::string sweep_family = "erdos-churn", sweep_verify = "invariants", sweep_out;
  std::vector<double> betas{2.0}, epsilons{0.05};
  std::uint64_t seeds = 10, first_seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool sweep_potential = false;
  GenParams sgp;
  std::string sweep_mode;
  sweep->add_option("--family", sweep_family, "stream family");
  sweep->add_option("--n", sgp.n, "vertex count");
  sweep->add_option("--T", sgp.T, "updates per cell");
  sweep->add_option("--w", sgp.w, "window size");
  sweep->add_option("--max-demand", sgp.max_demand, "insert demand bound");
  sweep->add_option("--f", sgp.f, "hyperedge size bound");
  sweep->add_option("--pool", sgp.pool, "hyperedge pool size");
  sweep->add_option("--query-every", sgp.query_every, "query interval");
  sweep->add_option("--seeds", seeds, "number of seeds per parameter pair");
  sweep->add_option("--seed", first_seed, "first seed");
  sweep->add_option("--betas", betas, "beta values")->delimiter(',');
  sweep->add_option("--epsilons", epsilons, "epsilon values")->delimiter(',');
  sweep->add_option("--mode", sweep_mode, "mode for every cell");
  sweep->add_option("--verify", sweep_verify, "none, invariants or oracle");
  sweep->add_flag("--potential", sweep_potential, "track the potential");
  sweep->add_option("--threads", threads, "worker threads");
  sweep->add_option("--out", sweep_out, "write results here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      const auto opts = session_options(verify, potential);
      std::optional<Session> session;
      const std::string stream_path = files.back();
      if (!resume_path.empty()) {
        if (files.size() != 1) throw InvalidArgument("with --resume pass only the stream file");
        session.emplace(Session::load(resume_path, opts));
      } else {
        if (files.size() != 2) throw InvalidArgument("run needs an instance file and a stream file");
        auto spec = load_instance(files.front());
        run_over.apply(spec.config);
        session.emplace(std::move(spec), opts);
      }
      const auto ops = load_stream(stream_path);
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw Error("cannot write " + out_path);
        return run_stream(*session, ops, out, std::cerr);
      }
      return run_stream(*session, ops, std::cout, std::cerr);
    }

    if (*gen) {
      auto fam = parse_family(family);
      if (!fam) throw InvalidArgument("unknown family '" + family + "'");
      gp.family = *fam;
      gp.seed = seed;
      const auto text = format_stream(generate_stream(gp));
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        write_file(gen_out, text);
      }
      if (!instance_out.empty()) {
        InstanceConfig cfg;
        gen_over.apply(cfg);
        if (cfg.mode == Mode::SetCover) {
          cfg.f = gp.f;
          cfg.size_budget = gp.pool;
        }
        if (cfg.mode == Mode::DemandSplit) cfg.demand_cap = std::max<std::int64_t>(gp.max_demand, 1);
        write_file(instance_out, format_instance(generate_instance(gp.n, seed, cfg)));
      }
      return kExitOk;
    }

    if (*sweep) {
      auto fam = parse_family(sweep_family);
      if (!fam) throw InvalidArgument("unknown family '" + sweep_family + "'");
      sgp.family = *fam;
      InstanceConfig cfg;
      if (!sweep_mode.empty()) {
        auto m = parse_mode(sweep_mode);
        if (!m) throw InvalidArgument("unknown mode '" + sweep_mode + "'");
        cfg.mode = *m;
      }
      if (cfg.mode == Mode::DemandSplit) cfg.demand_cap = std::max<std::int64_t>(sgp.max_demand, 1);
      std::vector<SweepCell> cells;
      for (double b : betas) {
        for (double e : epsilons) {
          for (std::uint64_t s = 0; s < seeds; ++s) cells.push_back({first_seed + s, b, e});
        }
      }
      const auto results = run_sweep(cells, sgp, cfg, session_options(sweep_verify, sweep_potential), threads);
      std::ofstream file;
      if (!sweep_out.empty()) {
        file.open(sweep_out, std::ios::trunc);
        if (!file) throw Error("cannot write " + sweep_out);
      }
      std::ostream& out = sweep_out.empty() ? std::cout : file;
      int code = kExitOk;
      for (const auto& r : results) {
        out << to_json(r) << '\n';
        if (!r.error.empty()) code = kExitRuntime;
        else if (r.failures > 0 && code == kExitOk) code = kExitVerify;
      }
      return code;
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
