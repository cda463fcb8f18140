#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "capvc/dynamic.hpp"
#include "capvc/extract.hpp"
#include "capvc/static_greedy.hpp"

namespace capvc {

// ---- capacitated set cover ---------------------------------------------------

inline std::uint64_t hyperedge_key(std::int64_t id) { return static_cast<std::uint64_t>(id); }

inline UpdateReport insert_hyperedge(GraphState& g, std::int64_t id, std::span<const VertexId> endpoints) {
  detail::require_quiescent(g);
  const auto& p = g.params();
  if (p.mode != Mode::SetCover) throw InvalidArgument("hyperedges need SetCover mode");
  if (id < 0) throw InvalidArgument("hyperedge ids must be non-negative");
  if (endpoints.size() < 2 || endpoints.size() > static_cast<std::size_t>(p.f)) {
    throw InvalidArgument("hyperedge size must lie in [2, f]");
  }
  if (!g.lookup(hyperedge_key(id)).empty()) throw InvalidArgument("hyperedge " + std::to_string(id) + " already present");
  if (static_cast<std::int64_t>(g.edge_count()) + 1 > p.size_budget) throw BudgetExceeded("hyperedge budget exhausted");
  return detail::insert_one(g, endpoints, 1, 1, hyperedge_key(id));
}

inline UpdateReport delete_hyperedge(GraphState& g, std::int64_t id) {
  detail::require_quiescent(g);
  if (g.params().mode != Mode::SetCover) throw InvalidArgument("hyperedges need SetCover mode");
  auto found = g.lookup(hyperedge_key(id));
  if (found.empty()) throw InvalidArgument("hyperedge " + std::to_string(id) + " not present");
  return detail::erase_one(g, found.front());
}

// ---- static non-uniform demands ----------------------------------------------

struct DemandEdge {
  VertexId u = 0;
  VertexId v = 0;
  std::int64_t demand = 1;
};

struct DemandStaticResult {
  GraphState state;
  CoverSolution cover;
  DualCertificate cert;
};

/// Loads demand edges into a fresh DemandStatic instance, runs the greedy drop
/// from level L on demand-sum weights and extracts both solutions.
inline DemandStaticResult solve_demand_static(std::span<const VertexAttrs> vertices, std::span<const DemandEdge> edges,
                                              InstanceConfig cfg) {
  cfg.mode = Mode::DemandStatic;
  GraphState g = new_instance(vertices, cfg);
  for (const auto& e : edges) {
    if (e.demand < 1) throw InvalidArgument("demand must be a positive integer");
    if (e.u == e.v) throw InvalidArgument("self loops are not allowed");
    const auto key = pair_key(e.u, e.v);
    if (!g.lookup(key).empty()) throw InvalidArgument("duplicate demand edge");
    const VertexId ends[2] = {e.u, e.v};
    g.attach_edge(ends, e.demand, e.demand, key);
  }
  solve_static_in_place(g);
  auto cover = current_cover(g);
  auto cert = dual_certificate(g);
  return {std::move(g), std::move(cover), std::move(cert)};
}

// ---- cluster alternative -------------------------------------------------------

/// Smallest i with 2^i >= d: cluster i holds demands in (2^(i-1), 2^i], d = 1 in 0.
inline int cluster_index(std::int64_t demand) {
  if (demand < 1) throw InvalidArgument("demand must be a positive integer");
  int i = 0;
  while ((std::int64_t{1} << i) < demand) ++i;
  return i;
}

/// One independent unit-demand scheme per demand cluster. Inside cluster i every
/// vertex has capacity max(1, floor(k_v / 2^i)); edges keep their real demand as
/// payload for extraction.
class ClusterManager {
 public:
  ClusterManager(std::span<const VertexAttrs> vertices, InstanceConfig cfg)
      : base_(vertices.begin(), vertices.end()), cfg_(std::move(cfg)) {
    cfg_.mode = Mode::DemandCluster;
    // Fix the band once so every cluster derives from the same cost range.
    const auto probe = derive_parameters(cfg_, base_);
    cfg_.c_min = probe.c_min;
    cfg_.c_max = probe.c_max;
  }

  UpdateReport insert(VertexId u, VertexId v, std::int64_t demand) {
    if (u == v) throw InvalidArgument("self loops are not allowed");
    const auto key = pair_key(u, v);
    if (where_.count(key)) {
      throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") already present");
    }
    const int i = cluster_index(demand);
    GraphState& g = ensure(i);
    if (!g.has_vertex(u) || !g.has_vertex(v)) {
      throw InvalidArgument("unknown endpoint in edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    detail::require_quiescent(g);
    const VertexId ends[2] = {u, v};
    auto rep = detail::insert_one(g, ends, 1, demand, key);
    where_.emplace(key, i);
    return rep;
  }

  UpdateReport erase(VertexId u, VertexId v) {
    auto it = where_.find(pair_key(u, v));
    if (it == where_.end()) {
      throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") not present");
    }
    GraphState& g = *clusters_.at(it->second);
    detail::require_quiescent(g);
    auto rep = detail::erase_one(g, g.lookup(it->first).front());
    where_.erase(it);
    return rep;
  }

  /// Cluster holding the edge, if present.
  std::optional<int> cluster_of(VertexId u, VertexId v) const {
    auto it = where_.find(pair_key(u, v));
    if (it == where_.end()) return std::nullopt;
    return it->second;
  }

  const GraphState* cluster(int i) const {
    auto it = clusters_.find(i);
    return it == clusters_.end() ? nullptr : it->second.get();
  }
  std::vector<int> cluster_ids() const {
    std::vector<int> ids;
    for (const auto& [i, g] : clusters_) ids.push_back(i);
    return ids;
  }
  const std::map<int, std::unique_ptr<GraphState>>& clusters() const { return clusters_; }
  std::map<int, std::unique_ptr<GraphState>>& clusters_mut() { return clusters_; }
  std::span<const VertexAttrs> vertices() const { return base_; }
  const InstanceConfig& config() const { return cfg_; }
  std::size_t edge_count() const { return where_.size(); }

  /// Union over clusters: copies of v are the sum of ceil(payload / k_v) per cluster.
  CoverSolution cover() const {
    CoverSolution sol;
    VertexId bound = 0;
    for (const auto& a : base_) bound = std::max(bound, a.id + 1);
    sol.copies.assign(bound, 0);
    for (const auto& [i, g] : clusters_) {
      detail::require_valid(*g);
      for (VertexId v : g->vertex_ids()) {
        const auto load = g->owned_payload(v);
        if (load > 0) sol.copies[v] += detail::ceil_div(load, capacity_of(v));
      }
      g->for_each_edge([&](EdgeId, const EdgeRecord& er) {
        sol.assignment.push_back({er.endpoints, er.payload, er.owner});
      });
    }
    for (const auto& a : base_) sol.cost += a.cost * static_cast<double>(sol.copies[a.id]);
    return sol;
  }

  /// Guarantee reported for the union: one cluster ratio per possible cluster.
  double theoretical_ratio_bound() const {
    int top = 0;
    for (const auto& [i, g] : clusters_) top = std::max(top, i);
    const auto p = derive_parameters(cfg_, base_);
    return static_cast<double>(top + 1) * theoretical_ratio(p);
  }

  void enable_potential_tracking(bool on) {
    tracking_ = on;
    for (auto& [i, g] : clusters_) g->enable_potential_tracking(on);
  }
  bool tracking_potential() const { return tracking_; }

  /// Rebuilds from saved cluster states (snapshot restore).
  void restore(std::map<int, std::unique_ptr<GraphState>> clusters) {
    clusters_ = std::move(clusters);
    where_.clear();
    for (const auto& [i, g] : clusters_) {
      g->for_each_edge([&, i = i](EdgeId, const EdgeRecord& er) { where_.emplace(er.key, i); });
    }
  }

 private:
  std::int64_t capacity_of(VertexId v) const {
    for (const auto& a : base_) {
      if (a.id == v) return a.capacity;
    }
    throw InvalidArgument("unknown vertex " + std::to_string(v));
  }

  GraphState& ensure(int i) {
    auto it = clusters_.find(i);
    if (it != clusters_.end()) return *it->second;
    std::vector<VertexAttrs> scaled = base_;
    for (auto& a : scaled) a.capacity = std::max<std::int64_t>(1, a.capacity >> i);
    auto g = std::make_unique<GraphState>(derive_parameters(cfg_, scaled), scaled);
    if (tracking_) g->enable_potential_tracking(true);
    return *clusters_.emplace(i, std::move(g)).first->second;
  }

  std::vector<VertexAttrs> base_;
  InstanceConfig cfg_;
  std::map<int, std::unique_ptr<GraphState>> clusters_;
  std::unordered_map<std::uint64_t, int> where_;
  bool tracking_ = false;
};

// ---- split alternative ---------------------------------------------------------

/// Hands each original edge wholly to the endpoint owning the strict majority of
/// its replicas; on a tie the smaller id takes it. Copies are recomputed from the
/// reassigned demands.
inline CoverSolution demand_split_extract(const GraphState& g) {
  if (g.params().mode != Mode::DemandSplit) throw InvalidArgument("split extraction needs DemandSplit mode");
  detail::require_valid(g);
  struct Tally {
    std::vector<VertexId> endpoints;
    std::int64_t demand = 0;
    std::map<VertexId, std::int64_t> owned;
  };
  std::vector<Tally> edges;
  std::unordered_map<std::uint64_t, std::size_t> at;
  g.for_each_edge([&](EdgeId, const EdgeRecord& er) {
    auto [it, fresh] = at.emplace(er.key, edges.size());
    if (fresh) edges.push_back({er.endpoints, 0, {}});
    auto& t = edges[it->second];
    t.demand += er.demand;
    t.owned[er.owner] += er.demand;
  });
  CoverSolution sol;
  sol.stamp = g.stamp();
  sol.copies.assign(g.id_bound(), 0);
  std::vector<std::int64_t> load(g.id_bound(), 0);
  for (const auto& t : edges) {
    VertexId pick = -1;
    std::int64_t most = -1;
    for (const auto& [v, c] : t.owned) {
      if (c > most) {
        most = c;
        pick = v;
      }
    }
    load[pick] += t.demand;
    sol.assignment.push_back({t.endpoints, t.demand, pick});
  }
  for (VertexId v : g.vertex_ids()) {
    sol.copies[v] = detail::ceil_div(load[v], g.attrs(v).capacity);
    sol.cost += g.attrs(v).cost * static_cast<double>(sol.copies[v]);
  }
  return sol;
}

}  // namespace capvc
