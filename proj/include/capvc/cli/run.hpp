#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "capvc/cli/generate.hpp"
#include "capvc/cli/parse.hpp"
#include "capvc/cli/report.hpp"
#include "capvc/cli/session.hpp"

namespace capvc::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2, kExitVerify = 3 };

/// Applies ops in order, writing one JSON line per query to `out`.
inline int run_stream(Session& session, const std::vector<StreamOp>& ops, std::ostream& out, std::ostream& err) {
  for (const auto& op : ops) {
    try {
      switch (op.kind) {
        case StreamOp::Kind::Query: out << to_json(session.query()) << '\n'; break;
        case StreamOp::Kind::Snapshot: session.save(op.path); break;
        default: session.apply(op); break;
      }
    } catch (const Error& e) {
      out.flush();
      err << "line " << op.line << " (" << format_op(op) << "): " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  out.flush();
  if (session.failure_count() > 0) {
    err << session.failure_count() << " check failure(s)\n";
    return kExitVerify;
  }
  return kExitOk;
}

struct SweepCell {
  std::uint64_t seed = 1;
  double beta = 2.0;
  double epsilon = 0.05;
};

struct SweepResult {
  SweepCell cell;
  std::uint64_t updates = 0;
  std::uint64_t queries = 0;
  double max_empirical_ratio = 0.0;
  double max_oracle_ratio = 0.0;
  double theoretical_ratio = 0.0;
  std::uint64_t count_ops = 0;
  std::uint64_t wall_ops = 0;
  std::uint64_t failures = 0;
  double seconds = 0.0;
  std::string error;
};

inline std::string to_json(const SweepResult& r) {
  JsonLine j;
  j.begin_object();
  j.key("seed").value(r.cell.seed);
  j.key("beta").value(r.cell.beta);
  j.key("epsilon").value(r.cell.epsilon);
  j.key("updates").value(r.updates);
  j.key("queries").value(r.queries);
  j.key("max_empirical_ratio").value(r.max_empirical_ratio);
  j.key("max_oracle_ratio").value(r.max_oracle_ratio);
  j.key("theoretical_ratio").value(r.theoretical_ratio);
  j.key("count_ops").value(r.count_ops);
  j.key("wall_ops").value(r.wall_ops);
  j.key("failures").value(r.failures);
  j.key("seconds").value(r.seconds);
  if (!r.error.empty()) j.key("error").value(std::string_view(r.error));
  j.end_object();
  return j.str();
}

/// One generated instance and stream per cell, each run in isolation.
inline SweepResult run_cell(const SweepCell& cell, GenParams gp, InstanceConfig cfg, SessionOptions opts) {
  SweepResult res;
  res.cell = cell;
  const auto start = std::chrono::steady_clock::now();
  try {
    gp.seed = cell.seed;
    cfg.beta = cell.beta;
    cfg.epsilon = cell.epsilon;
    if (cfg.mode == Mode::SetCover) {
      cfg.f = gp.f;
      if (cfg.size_budget < gp.pool) cfg.size_budget = gp.pool;
    }
    auto spec = generate_instance(gp.n, cell.seed, cfg);
    const auto ops = generate_stream(gp);
    Session s(std::move(spec), opts);
    for (const auto& op : ops) {
      if (op.kind == StreamOp::Kind::Query) {
        const auto q = s.query();
        ++res.queries;
        res.theoretical_ratio = q.theoretical_ratio;
        if (q.empirical_ratio && std::isfinite(*q.empirical_ratio)) {
          res.max_empirical_ratio = std::max(res.max_empirical_ratio, *q.empirical_ratio);
        }
        if (q.oracle_opt && *q.oracle_opt > 0.0) {
          res.max_oracle_ratio = std::max(res.max_oracle_ratio, q.cost / *q.oracle_opt);
        }
        res.count_ops = q.count_ops_cumulative;
        res.wall_ops = q.wall_ops;
      } else if (op.is_update()) {
        s.apply(op);
        ++res.updates;
      }
    }
    res.failures = s.failure_count();
  } catch (const Error& e) {
    res.error = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

/// Runs every cell on a small thread pool; results come back in cell order.
inline std::vector<SweepResult> run_sweep(const std::vector<SweepCell>& cells, const GenParams& gp,
                                          const InstanceConfig& cfg, SessionOptions opts, unsigned threads) {
  std::vector<SweepResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size()))));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = run_cell(cells[i], gp, cfg, opts);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace capvc::cli
