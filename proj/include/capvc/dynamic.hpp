#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "capvc/graph_state.hpp"
#include "capvc/potential.hpp"

namespace capvc {

struct LevelEvent {
  VertexId vertex = 0;
  Level from = 0;
  Level to = 0;
  std::int64_t touched = 0;
  /// Bank drop B(before) - B(after); only filled when tracking the potential.
  double bank_drop = 0.0;
};

/// Per-update accounting.
struct UpdateReport {
  std::int64_t touched_edges = 0;
  std::vector<LevelEvent> level_ups;
  std::vector<LevelEvent> level_downs;
  std::size_t dirty_peak = 0;
  std::uint64_t wall_ops = 0;
  /// Bank increase of the adjustment steps (sum over replicas in split mode).
  double deposit = 0.0;
  /// Accounting and multiplicity violations, one line each.
  std::vector<std::string> failures;
  /// Level-down events that checked the single-copy condition.
  std::int64_t level_down_checks = 0;

  void merge(const UpdateReport& o) {
    touched_edges += o.touched_edges;
    level_ups.insert(level_ups.end(), o.level_ups.begin(), o.level_ups.end());
    level_downs.insert(level_downs.end(), o.level_downs.begin(), o.level_downs.end());
    dirty_peak = std::max(dirty_peak, o.dirty_peak);
    wall_ops += o.wall_ops;
    deposit += o.deposit;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    level_down_checks += o.level_down_checks;
  }
};

using FixReport = UpdateReport;

/// Safety valve on elementary operations within one repair pass.
inline constexpr std::uint64_t kFixOpBudget = 1'000'000'000ULL;

namespace detail {

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline void check_accounting(const GraphState& g, const AccountingEvent& ev, VertexId v, UpdateReport& rep) {
  auto res = assert_event_accounting(g.params(), ev);
  if (!res.ok) {
    std::string what = std::string(to_string(ev.kind)) + " accounting failed";
    if (v >= 0) what += " at vertex " + std::to_string(v);
    what += ": bank " + fmt_double(ev.bank_before) + " -> " + fmt_double(ev.bank_after) + ", touched " +
            std::to_string(ev.touched) + ", margin " + fmt_double(res.margin);
    rep.failures.push_back(std::move(what));
  }
}

inline void screen_affected(GraphState& g) {
  // affected() is invalidated by the next mutation, so copy first.
  std::vector<VertexId> touched(g.affected().begin(), g.affected().end());
  for (VertexId w : touched) g.screen(w);
}

/// Ceiling of owned demand over capacity.
inline std::int64_t copies_needed(const GraphState& g, VertexId v) {
  const auto owned = g.owned_demand(v);
  if (owned == 0) return 0;
  if (g.params().unbounded_capacity()) return 1;
  const auto k = g.attrs(v).capacity;
  return (owned + k - 1) / k;
}

}  // namespace detail

/// Procedure FIX: drains the FIFO dirty queue one level event at a time.
inline void fix_into(GraphState& g, UpdateReport& rep) {
  const std::uint64_t start = g.wall_ops();
  const bool tracking = g.tracking_potential();
  rep.dirty_peak = std::max(rep.dirty_peak, g.dirty_size());
  while (auto next = g.pop_dirty()) {
    const VertexId v = *next;
    const Level from = g.level(v);
    const double before = tracking ? g.bank() : 0.0;
    std::int64_t touched = 0;
    bool up = false;
    if (g.too_heavy(v)) {
      touched = g.raise(v);
      up = true;
    } else if (g.too_light(v)) {
      ++rep.level_down_checks;
      if (detail::copies_needed(g, v) > 1) {
        rep.failures.push_back("level-down of vertex " + std::to_string(v) + " while it needs " +
                               std::to_string(detail::copies_needed(g, v)) + " copies");
      }
      touched = g.lower(v);
    } else {
      continue;
    }
    rep.touched_edges += touched;
    LevelEvent ev{v, from, g.level(v), touched, 0.0};
    if (tracking) {
      const double after = g.bank();
      ev.bank_drop = before - after;
      detail::check_accounting(
          g, {up ? AccountingKind::LevelUp : AccountingKind::LevelDown, before, after, touched}, v, rep);
    }
    (up ? rep.level_ups : rep.level_downs).push_back(ev);
    detail::screen_affected(g);
    rep.dirty_peak = std::max(rep.dirty_peak, g.dirty_size());
    if (g.wall_ops() - start > kFixOpBudget) {
      throw Error("FIX exceeded its operation budget; parameters or state are inconsistent");
    }
  }
}

inline FixReport fix(GraphState& g) {
  FixReport rep;
  const auto ops0 = g.wall_ops();
  fix_into(g, rep);
  rep.wall_ops = g.wall_ops() - ops0;
  return rep;
}

namespace detail {

/// One structural edge update: adjust, then repair.
inline UpdateReport insert_one(GraphState& g, std::span<const VertexId> endpoints, std::int64_t demand,
                               std::int64_t payload, std::uint64_t key) {
  UpdateReport rep;
  const auto ops0 = g.wall_ops();
  const bool tracking = g.tracking_potential();
  const double before = tracking ? g.bank() : 0.0;
  g.attach_edge(endpoints, demand, payload, key);
  rep.touched_edges += 1;
  if (tracking) {
    rep.deposit = g.bank() - before;
    check_accounting(g, {AccountingKind::Insert, before, g.bank(), 1}, -1, rep);
  }
  screen_affected(g);
  fix_into(g, rep);
  rep.wall_ops = g.wall_ops() - ops0;
  return rep;
}

inline UpdateReport erase_one(GraphState& g, EdgeId e) {
  UpdateReport rep;
  const auto ops0 = g.wall_ops();
  const bool tracking = g.tracking_potential();
  const double before = tracking ? g.bank() : 0.0;
  g.detach_edge(e);
  rep.touched_edges += 1;
  if (tracking) {
    rep.deposit = g.bank() - before;
    check_accounting(g, {AccountingKind::Delete, before, g.bank(), 1}, -1, rep);
  }
  screen_affected(g);
  fix_into(g, rep);
  rep.wall_ops = g.wall_ops() - ops0;
  return rep;
}

inline void require_quiescent(const GraphState& g) {
  if (!g.quiescent()) throw Error("update issued while repairs are pending");
}

}  // namespace detail

/// Inserts (u, v). In DemandSplit mode an edge of demand d becomes d parallel
/// unit replicas, each inserted as its own update.
inline UpdateReport insert_edge(GraphState& g, VertexId u, VertexId v, std::int64_t demand = 1) {
  detail::require_quiescent(g);
  const Mode mode = g.params().mode;
  if (mode == Mode::SetCover) throw InvalidArgument("set cover instances take hyperedge updates");
  if (mode == Mode::DemandStatic) throw InvalidArgument("DemandStatic instances are solved statically");
  if (u == v) throw InvalidArgument("self loops are not allowed");
  if (!g.has_vertex(u) || !g.has_vertex(v)) {
    throw InvalidArgument("unknown endpoint in edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  if (demand < 1) throw InvalidArgument("demand must be a positive integer");
  const auto key = pair_key(u, v);
  if (!g.lookup(key).empty()) {
    throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") already present");
  }
  const VertexId ends[2] = {u, v};
  if (mode != Mode::DemandSplit) {
    if (demand != 1) throw InvalidArgument("non-unit demand requires a demand mode");
    return detail::insert_one(g, ends, 1, 1, key);
  }
  if (demand > g.params().demand_cap) throw InvalidArgument("demand exceeds the configured cap");
  UpdateReport total;
  for (std::int64_t r = 0; r < demand; ++r) total.merge(detail::insert_one(g, ends, 1, 1, key));
  return total;
}

/// Deletes (u, v) and, in DemandSplit mode, all of its replicas.
inline UpdateReport delete_edge(GraphState& g, VertexId u, VertexId v) {
  detail::require_quiescent(g);
  const Mode mode = g.params().mode;
  if (mode == Mode::SetCover) throw InvalidArgument("set cover instances take hyperedge updates");
  if (mode == Mode::DemandStatic) throw InvalidArgument("DemandStatic instances are solved statically");
  auto found = g.lookup(pair_key(u, v));
  if (found.empty()) {
    throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") not present");
  }
  std::vector<EdgeId> replicas(found.begin(), found.end());
  UpdateReport total;
  for (EdgeId e : replicas) total.merge(detail::erase_one(g, e));
  return total;
}

}  // namespace capvc
