#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "capvc/cli/parse.hpp"
#include "capvc/cli/report.hpp"
#include "capvc/cli/snapshot.hpp"
#include "capvc/dynamic.hpp"
#include "capvc/extensions.hpp"
#include "capvc/extract.hpp"
#include "capvc/oracle.hpp"
#include "capvc/static_greedy.hpp"

namespace capvc::cli {

enum class Verify { None, Invariants, Oracle };

inline std::optional<Verify> parse_verify(std::string_view s) {
  if (s == "none") return Verify::None;
  if (s == "invariants") return Verify::Invariants;
  if (s == "oracle") return Verify::Oracle;
  return std::nullopt;
}

inline std::string_view to_string(Verify v) {
  switch (v) {
    case Verify::None: return "none";
    case Verify::Invariants: return "invariants";
    case Verify::Oracle: return "oracle";
  }
  return "?";
}

struct SessionOptions {
  Verify verify = Verify::None;
  bool potential = false;
};

/// Drives one instance in any mode: applies stream operations, answers queries,
/// runs the selected verification and persists itself.
class Session {
 public:
  Session(InstanceSpec spec, SessionOptions opts) : spec_(std::move(spec)), opts_(opts) {
    switch (mode()) {
      case Mode::DemandCluster:
        clusters_.emplace(spec_.vertices, spec_.config);
        clusters_->enable_potential_tracking(opts_.potential);
        break;
      case Mode::DemandStatic:
        // Validate the instance eagerly; the scheme itself is solved per query.
        derive_parameters(spec_.config, spec_.vertices);
        break;
      default:
        state_.emplace(new_instance(spec_.vertices, spec_.config));
        state_->enable_potential_tracking(opts_.potential);
        break;
    }
  }

  Mode mode() const { return spec_.config.mode; }
  const InstanceSpec& spec() const { return spec_; }
  const SessionOptions& options() const { return opts_; }
  std::uint64_t t() const { return t_; }
  std::uint64_t failure_count() const { return total_failures_; }
  const GraphState* state() const { return state_ ? &*state_ : nullptr; }
  const ClusterManager* clusters() const { return clusters_ ? &*clusters_ : nullptr; }
  const std::vector<DemandEdge>& static_edges() const { return static_edges_; }

  /// Applies one update and runs per-update verification.
  UpdateReport apply(const StreamOp& op) {
    if (!op.is_update()) throw InvalidArgument("apply() takes updates only");
    UpdateReport rep = dispatch(op);
    ++t_;
    count_ops_ += static_cast<std::uint64_t>(rep.touched_edges);
    wall_ops_ += rep.wall_ops;
    for (const auto& f : rep.failures) fail(f);
    if (opts_.verify != Verify::None) verify_update();
    return rep;
  }

  QueryReport query() {
    QueryReport r;
    r.t = t_;
    r.count_ops_cumulative = count_ops_;
    CoverInstance inst;
    switch (mode()) {
      case Mode::DemandCluster: query_clusters(r, inst); break;
      case Mode::DemandStatic: query_static(r, inst); break;
      default: query_state(r, inst); break;
    }
    r.wall_ops = wall_ops_;
    if (opts_.verify == Verify::Oracle) {
      const auto opt = brute_force_opt(inst);
      r.oracle_opt = opt.cost;
      const double slack = kOracleTolerance * std::max(1.0, opt.cost);
      if (r.dual_lb && *r.dual_lb > opt.cost + slack) fail("dual bound exceeds the brute-force optimum");
      if (opt.cost > r.cost + slack) fail("cover cheaper than the brute-force optimum");
      if (r.cost > r.theoretical_ratio * opt.cost + kRatioSlack) fail("cost/OPT exceeds the theoretical ratio");
    }
    if (opts_.verify != Verify::None || opts_.potential) {
      r.check_failures = std::move(pending_);
    }
    pending_.clear();
    return r;
  }

  // ---- persistence ---------------------------------------------------------------

  std::string snapshot_text() const {
    std::ostringstream os;
    const auto& c = spec_.config;
    os << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
    os << "session " << capvc::to_string(mode()) << ' ' << t_ << ' ' << count_ops_ << ' ' << wall_ops_ << ' '
       << total_failures_ << '\n';
    auto opt_real = [](const std::optional<double>& x) { return x ? hexfloat(*x) : std::string("-"); };
    os << "config " << hexfloat(c.beta) << ' ' << hexfloat(c.epsilon) << ' ' << c.size_budget << ' ' << c.f << ' '
       << opt_real(c.c_min) << ' ' << opt_real(c.c_max) << ' ' << c.demand_cap << ' ' << opt_real(c.alpha_override)
       << ' ' << (c.levels_override ? std::to_string(*c.levels_override) : std::string("-")) << '\n';
    os << "instance " << spec_.vertices.size() << '\n';
    for (const auto& v : spec_.vertices) os << "v " << v.id << ' ' << hexfloat(v.cost) << ' ' << v.capacity << '\n';
    os << "pending " << pending_.size() << '\n';
    for (const auto& p : pending_) os << "p " << p << '\n';
    switch (mode()) {
      case Mode::DemandCluster:
        os << "clusters " << clusters_->clusters().size() << '\n';
        for (const auto& [i, g] : clusters_->clusters()) {
          os << "cluster " << i << '\n';
          write_image(os, g->image());
        }
        break;
      case Mode::DemandStatic:
        os << "demand-edges " << static_edges_.size() << '\n';
        for (const auto& e : static_edges_) os << "d " << e.u << ' ' << e.v << ' ' << e.demand << '\n';
        break;
      default:
        os << "state\n";
        write_image(os, state_->image());
        break;
    }
    os << "end\n";
    return seal(os.str());
  }

  void save(const std::string& path) const { write_file(path, snapshot_text()); }

  static Session from_snapshot_text(const std::string& text, SessionOptions opts) {
    using R = SnapshotReader;
    R r(unseal(text));
    auto s = r.expect("session");
    if (s.size() != 6) throw SnapshotError("snapshot: malformed session line");
    auto mode = parse_mode(s[1]);
    if (!mode) throw SnapshotError("snapshot: unknown mode " + s[1]);
    auto c = r.expect("config");
    if (c.size() != 10) throw SnapshotError("snapshot: malformed config line");
    auto opt_real = [](const std::string& x) -> std::optional<double> {
      if (x == "-") return std::nullopt;
      return R::real(x);
    };
    InstanceSpec spec;
    spec.config.mode = *mode;
    spec.config.beta = R::real(c[1]);
    spec.config.epsilon = R::real(c[2]);
    spec.config.size_budget = R::integer(c[3]);
    spec.config.f = static_cast<int>(R::integer(c[4]));
    spec.config.c_min = opt_real(c[5]);
    spec.config.c_max = opt_real(c[6]);
    spec.config.demand_cap = R::integer(c[7]);
    spec.config.alpha_override = opt_real(c[8]);
    if (c[9] != "-") spec.config.levels_override = static_cast<Level>(R::integer(c[9]));
    auto n = r.expect("instance");
    if (n.size() != 2) throw SnapshotError("snapshot: malformed instance line");
    const auto nv = R::unsigned_integer(n[1]);
    for (std::uint64_t i = 0; i < nv; ++i) {
      auto v = r.expect("v");
      if (v.size() != 4) throw SnapshotError("snapshot: malformed vertex line");
      spec.vertices.push_back({static_cast<VertexId>(R::integer(v[1])), R::real(v[2]), R::integer(v[3])});
    }

    Session out(spec, opts);
    out.t_ = R::unsigned_integer(s[2]);
    out.count_ops_ = R::unsigned_integer(s[3]);
    out.wall_ops_ = R::unsigned_integer(s[4]);
    out.total_failures_ = R::unsigned_integer(s[5]);
    auto pn = r.expect("pending");
    if (pn.size() != 2) throw SnapshotError("snapshot: malformed pending line");
    const auto np = R::unsigned_integer(pn[1]);
    for (std::uint64_t i = 0; i < np; ++i) out.pending_.push_back(r.rest_of_line("p"));

    switch (*mode) {
      case Mode::DemandCluster: {
        auto cl = r.expect("clusters");
        if (cl.size() != 2) throw SnapshotError("snapshot: malformed clusters line");
        std::map<int, std::unique_ptr<GraphState>> restored;
        const auto k = R::unsigned_integer(cl[1]);
        for (std::uint64_t i = 0; i < k; ++i) {
          auto ci = r.expect("cluster");
          if (ci.size() != 2) throw SnapshotError("snapshot: malformed cluster line");
          auto g = std::make_unique<GraphState>(GraphState::from_image(read_image(r)));
          if (g->tracking_potential() != opts.potential) g->enable_potential_tracking(opts.potential);
          restored.emplace(static_cast<int>(R::integer(ci[1])), std::move(g));
        }
        out.clusters_->restore(std::move(restored));
        break;
      }
      case Mode::DemandStatic: {
        auto de = r.expect("demand-edges");
        if (de.size() != 2) throw SnapshotError("snapshot: malformed demand-edges line");
        const auto k = R::unsigned_integer(de[1]);
        for (std::uint64_t i = 0; i < k; ++i) {
          auto d = r.expect("d");
          if (d.size() != 4) throw SnapshotError("snapshot: malformed demand edge");
          out.static_edges_.push_back({static_cast<VertexId>(R::integer(d[1])), static_cast<VertexId>(R::integer(d[2])),
                                       R::integer(d[3])});
          out.static_keys_.emplace(pair_key(out.static_edges_.back().u, out.static_edges_.back().v), i);
        }
        break;
      }
      default: {
        r.expect("state");
        out.state_.emplace(GraphState::from_image(read_image(r)));
        if (out.state_->tracking_potential() != opts.potential) out.state_->enable_potential_tracking(opts.potential);
        break;
      }
    }
    r.expect("end");
    if (!r.done()) throw SnapshotError("snapshot: trailing data after end marker");
    return out;
  }

  static Session load(const std::string& path, SessionOptions opts) {
    return from_snapshot_text(read_file(path), opts);
  }

 private:
  void fail(std::string what) {
    ++total_failures_;
    pending_.push_back("t=" + std::to_string(t_) + ": " + what);
  }

  UpdateReport dispatch(const StreamOp& op) {
    using K = StreamOp::Kind;
    const bool hyper = op.kind == K::InsertHyper || op.kind == K::DeleteHyper;
    if (hyper != (mode() == Mode::SetCover)) {
      throw InvalidArgument(std::string(hyper ? "hyperedge operation" : "edge operation") + " in " +
                            std::string(capvc::to_string(mode())) + " mode");
    }
    switch (mode()) {
      case Mode::DemandCluster:
        if (op.kind == K::InsertEdge) return clusters_->insert(op.u, op.v, op.demand);
        return clusters_->erase(op.u, op.v);
      case Mode::DemandStatic: return static_update(op);
      case Mode::SetCover:
        if (op.kind == K::InsertHyper) return insert_hyperedge(*state_, op.id, op.endpoints);
        return delete_hyperedge(*state_, op.id);
      default:
        if (op.kind == K::InsertEdge) return insert_edge(*state_, op.u, op.v, op.demand);
        return delete_edge(*state_, op.u, op.v);
    }
  }

  UpdateReport static_update(const StreamOp& op) {
    const auto key = pair_key(op.u, op.v);
    if (op.kind == StreamOp::Kind::InsertEdge) {
      if (op.u == op.v) throw InvalidArgument("self loops are not allowed");
      if (!has_vertex(op.u) || !has_vertex(op.v)) throw InvalidArgument("unknown endpoint");
      if (static_keys_.count(key)) throw InvalidArgument("edge already present");
      static_keys_.emplace(key, static_edges_.size());
      static_edges_.push_back({op.u, op.v, op.demand});
    } else {
      auto it = static_keys_.find(key);
      if (it == static_keys_.end()) throw InvalidArgument("edge not present");
      static_edges_.erase(static_edges_.begin() + static_cast<std::ptrdiff_t>(it->second));
      static_keys_.clear();
      for (std::size_t i = 0; i < static_edges_.size(); ++i) {
        static_keys_.emplace(pair_key(static_edges_[i].u, static_edges_[i].v), i);
      }
    }
    UpdateReport rep;
    rep.touched_edges = 1;
    rep.wall_ops = 1;
    return rep;
  }

  bool has_vertex(VertexId v) const {
    for (const auto& a : spec_.vertices) {
      if (a.id == v) return true;
    }
    return false;
  }

  // ---- verification --------------------------------------------------------------

  void check_state(const GraphState& g, const std::string& tag) {
    auto add = [&](const std::vector<std::string>& list) {
      for (const auto& f : list) fail(tag + f);
    };
    add(check_structure(g));
    add(check_invariant1(g));
    add(check_no_level0_owner(g));
    if (!check_tightness(g, band_factor(g.params()))) fail(tag + "scheme is not tight");
    add(dual_violations(dual_certificate(g), g));
    if (g.params().mode != Mode::DemandCluster) add(check_cover_feasible(current_cover(g), g));
    if (g.tracking_potential()) {
      const auto scratch = potential_from_scratch(g);
      const double tracked = g.bank();
      if (std::abs(tracked - scratch.bank) > 1e-9 * std::max(1.0, std::abs(scratch.bank))) {
        fail(tag + "tracked potential drifted from the recomputed value");
      }
    }
  }

  void check_coverage(const CoverSolution& cover) {
    std::unordered_map<VertexId, std::int64_t> load;
    for (const auto& a : cover.assignment) load[a.owner] += a.demand;
    for (const auto& v : spec_.vertices) {
      const auto x = static_cast<std::size_t>(v.id) < cover.copies.size() ? cover.copies[v.id] : 0;
      const auto l = load.count(v.id) ? load[v.id] : 0;
      if (l > 0 && x < 1) fail("vertex " + std::to_string(v.id) + " covers demand with no copy");
      if (mode() != Mode::WeightedVC && l > v.capacity * x) {
        fail("vertex " + std::to_string(v.id) + " over capacity");
      }
    }
  }

  void verify_update() {
    switch (mode()) {
      case Mode::DemandCluster:
        for (const auto& [i, g] : clusters_->clusters()) check_state(*g, "cluster " + std::to_string(i) + ": ");
        check_coverage(clusters_->cover());
        break;
      case Mode::DemandStatic: break;
      case Mode::DemandSplit: {
        check_state(*state_, "");
        std::unordered_map<std::uint64_t, std::int64_t> replicas;
        state_->for_each_edge([&](EdgeId, const EdgeRecord& er) { ++replicas[er.key]; });
        for (const auto& [key, count] : replicas) {
          if (static_cast<std::int64_t>(state_->lookup(key).size()) != count) fail("replica table out of sync");
        }
        const auto split = demand_split_extract(*state_);
        check_coverage(split);
        const auto replica = current_cover(*state_);
        if (split.cost > 2.0 * replica.cost + kRatioSlack) fail("split reassignment more than doubles the cost");
        break;
      }
      default: check_state(*state_, ""); break;
    }
  }

  // ---- queries ---------------------------------------------------------------------

  static std::vector<std::int64_t> histogram(const GraphState& g, std::vector<std::int64_t> into = {}) {
    into.resize(static_cast<std::size_t>(g.params().levels) + 1, 0);
    for (VertexId v : g.vertex_ids()) ++into[g.level(v)];
    return into;
  }

  void query_state(QueryReport& r, CoverInstance& inst) {
    const GraphState& g = *state_;
    const auto cert = dual_certificate(g);
    const auto replica = current_cover(g);
    if (mode() == Mode::DemandSplit) {
      const auto split = demand_split_extract(g);
      r.cost = split.cost;
      r.h = split.max_copies();
      r.theoretical_ratio = 2.0 * theoretical_ratio(g.params());
    } else {
      const auto rr = ratio_report(g, replica, cert);
      r.cost = rr.cost;
      r.h = replica.max_copies();
      r.theoretical_ratio = rr.theoretical_ratio;
    }
    r.dual_lb = cert.value;
    r.empirical_ratio = cert.value > 0.0 ? r.cost / cert.value : (r.cost > 0.0 ? INFINITY : 1.0);
    if (r.cost > r.theoretical_ratio * cert.value + kRatioSlack) fail("cost exceeds the theoretical ratio times the dual bound");
    r.levels_histogram = histogram(g);
    if (opts_.potential) r.potential = g.potential();
    if (opts_.verify == Verify::Oracle) inst = to_cover_instance(g);
  }

  void query_clusters(QueryReport& r, CoverInstance& inst) {
    const auto cover = clusters_->cover();
    r.cost = cover.cost;
    r.h = cover.max_copies();
    r.theoretical_ratio = clusters_->theoretical_ratio_bound();
    PotentialSnapshot pot;
    for (const auto& [i, g] : clusters_->clusters()) {
      r.levels_histogram = histogram(*g, std::move(r.levels_histogram));
      const auto p = g->potential();
      pot.phi_sum += p.phi_sum;
      pot.psi_sum += p.psi_sum;
      pot.bank += p.bank;
    }
    if (r.levels_histogram.empty()) {
      r.levels_histogram.assign(static_cast<std::size_t>(derive_parameters(clusters_->config(), spec_.vertices).levels) + 1, 0);
      r.levels_histogram[0] = static_cast<std::int64_t>(spec_.vertices.size());
    }
    if (opts_.potential) r.potential = pot;
    if (opts_.verify == Verify::Oracle) {
      inst.vertices.clear();
      for (const auto& v : spec_.vertices) inst.vertices.push_back({v.id, v.cost, v.capacity});
      for (const auto& a : cover.assignment) inst.edges.push_back({a.endpoints, a.demand});
    }
  }

  void query_static(QueryReport& r, CoverInstance& inst) {
    auto res = solve_demand_static(spec_.vertices, static_edges_, spec_.config);
    GraphState& g = res.state;
    wall_ops_ += g.wall_ops();
    r.cost = res.cover.cost;
    r.h = res.cover.max_copies();
    r.dual_lb = res.cert.value;
    r.theoretical_ratio = static_ratio(g.params());
    r.empirical_ratio = res.cert.value > 0.0 ? r.cost / res.cert.value : (r.cost > 0.0 ? INFINITY : 1.0);
    if (r.cost > r.theoretical_ratio * res.cert.value + kRatioSlack) fail("cost exceeds the static ratio times the dual bound");
    r.levels_histogram = histogram(g);
    if (opts_.verify != Verify::None) {
      for (const auto& f : check_valid(g)) fail(f);
      for (const auto& f : check_structure(g)) fail(f);
      if (!check_tightness(g, g.params().beta + 1.0)) fail("static scheme is not (beta+1)-tight");
      for (const auto& f : dual_violations(res.cert, g)) fail(f);
      for (const auto& f : check_cover_feasible(res.cover, g)) fail(f);
      for (VertexId v : g.vertex_ids()) {
        if (g.level(v) > 0 && can_drop(g, v)) fail("static scheme is improvable at vertex " + std::to_string(v));
      }
    }
    if (opts_.verify == Verify::Oracle) inst = to_cover_instance(g);
  }

  InstanceSpec spec_;
  SessionOptions opts_;
  std::optional<GraphState> state_;
  std::optional<ClusterManager> clusters_;
  std::vector<DemandEdge> static_edges_;
  std::unordered_map<std::uint64_t, std::size_t> static_keys_;

  std::uint64_t t_ = 0;
  std::uint64_t count_ops_ = 0;
  std::uint64_t wall_ops_ = 0;
  std::uint64_t total_failures_ = 0;
  std::vector<std::string> pending_;
};

}  // namespace capvc::cli
