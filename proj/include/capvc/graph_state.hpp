#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "capvc/level_profile.hpp"
#include "capvc/potential.hpp"
#include "capvc/types.hpp"

namespace capvc {

struct EdgeRecord {
  std::vector<VertexId> endpoints;
  /// Incidence slot per endpoint, parallel to `endpoints`.
  std::vector<std::int32_t> incidence;
  /// Load the edge contributes to its endpoints' profiles.
  std::int64_t demand = 1;
  /// Demand the edge carries for extraction; differs from `demand` only for
  /// cluster instances, which run on unit edges.
  std::int64_t payload = 1;
  std::uint64_t key = 0;
  Level level = 0;
  VertexId owner = -1;
  bool alive = false;
};

/// Lookup key of an unordered vertex pair.
inline std::uint64_t pair_key(VertexId u, VertexId v) {
  auto a = static_cast<std::uint64_t>(std::min(u, v));
  auto b = static_cast<std::uint64_t>(std::max(u, v));
  return (a << 32) | b;
}

/// The instance plus its level scheme.
///
/// Every incident edge of a vertex sits in that vertex's bucket for the edge's
/// level, kept as an intrusive doubly-linked list per (vertex, level). Raising or
/// lowering a vertex only walks its own-level bucket, so an event touches exactly
/// D_v(0, level(v)) edges. Edges are never renumbered; ids increase in insertion
/// order and all deterministic iteration follows id order.
///
/// Ownership: a new edge goes to the smallest-id endpoint at its level. After
/// that the owner keeps the edge while it still attains the edge level; when it
/// drops below, the smallest-id endpoint at the edge level takes over.
class GraphState {
 public:
  struct VertexImage {
    VertexAttrs attrs;
    Level level = 0;
  };
  struct EdgeImage {
    std::vector<VertexId> endpoints;
    std::int64_t demand = 1;
    std::int64_t payload = 1;
    std::uint64_t key = 0;
    Level level = 0;
    VertexId owner = -1;
  };
  struct BucketImage {
    VertexId vertex = 0;
    Level level = 0;
    std::vector<std::int32_t> edges;  // indices into Image::edges, list order
  };
  /// Complete, order-preserving description of a quiescent state.
  struct Image {
    Parameters params;
    std::vector<VertexImage> vertices;
    std::vector<EdgeImage> edges;
    std::vector<BucketImage> buckets;
    std::uint64_t stamp = 0;
    std::uint64_t wall_ops = 0;
    std::uint64_t touched_total = 0;
    bool tracking = false;
    double phi_sum = 0.0;
    double psi_sum = 0.0;
    bool static_scheme = false;
  };

  GraphState(Parameters params, std::span<const VertexAttrs> vertices)
      : params_(params), weights_(params) {
    for (const auto& a : vertices) register_vertex(a, /*check_budget=*/false);
  }

  const Parameters& params() const { return params_; }
  const EdgeWeights& edge_weights() const { return weights_; }

  // ---- vertices -------------------------------------------------------------

  void add_vertex(const VertexAttrs& a) {
    if (!(a.cost > 0.0)) throw InvalidArgument("vertex cost must be positive");
    if (a.capacity < 1) throw InvalidArgument("vertex capacity must be >= 1");
    if (a.cost < params_.c_min || a.cost > params_.c_max) {
      throw InvalidArgument("vertex cost " + std::to_string(a.cost) + " outside the declared band");
    }
    if (params_.mode == Mode::DemandStatic && a.capacity > params_.k_max) {
      throw InvalidArgument("capacity exceeds the declared maximum");
    }
    register_vertex(a, /*check_budget=*/true);
  }

  bool has_vertex(VertexId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < vertices_.size() && vertices_[v].registered;
  }
  std::size_t vertex_count() const { return vertex_count_; }
  /// Upper bound (exclusive) on registered vertex ids.
  std::size_t id_bound() const { return vertices_.size(); }

  std::vector<VertexId> vertex_ids() const {
    std::vector<VertexId> ids;
    ids.reserve(vertex_count_);
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (vertices_[v].registered) ids.push_back(static_cast<VertexId>(v));
    }
    return ids;
  }

  const VertexAttrs& attrs(VertexId v) const { return vert(v).attrs; }
  Level level(VertexId v) const { return vert(v).level; }
  double weight(VertexId v) const { return vert(v).weight; }
  const LevelProfile& profile(VertexId v) const { return vert(v).profile; }
  std::int64_t degree(VertexId v) const { return vert(v).degree; }
  std::int64_t owned_count(VertexId v) const { return vert(v).owned_count; }
  std::int64_t owned_demand(VertexId v) const { return vert(v).owned_demand; }
  std::int64_t owned_payload(VertexId v) const { return vert(v).owned_payload; }
  double psi_cached(VertexId v) const { return vert(v).psi; }

  /// Capacity as seen by the weight formula (unbounded in WeightedVC).
  std::int64_t effective_capacity(VertexId v) const { return vert(v).profile.capacity(); }

  // ---- edges ----------------------------------------------------------------

  std::size_t edge_count() const { return edge_count_; }
  std::size_t edge_id_bound() const { return edges_.size(); }
  bool edge_alive(EdgeId e) const {
    return e >= 0 && static_cast<std::size_t>(e) < edges_.size() && edges_[e].alive;
  }
  const EdgeRecord& edge(EdgeId e) const {
    if (!edge_alive(e)) throw InvalidArgument("unknown edge " + std::to_string(e));
    return edges_[e];
  }

  template <class F>
  void for_each_edge(F&& fn) const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].alive) fn(static_cast<EdgeId>(e), edges_[e]);
    }
  }

  /// Live edges registered under a lookup key, in insertion order.
  std::span<const EdgeId> lookup(std::uint64_t key) const {
    auto it = lookup_.find(key);
    if (it == lookup_.end()) return {};
    return it->second;
  }

  /// Edges of v whose level is i, in bucket order.
  std::vector<EdgeId> bucket(VertexId v, Level i) const {
    std::vector<EdgeId> out;
    collect(v, i, out);
    return out;
  }

  // ---- structural mutation (no repair) ----------------------------------------

  /// Adds an edge at level max over its endpoints. Refreshes the endpoints.
  EdgeId attach_edge(std::span<const VertexId> endpoints, std::int64_t demand, std::int64_t payload,
                     std::uint64_t key) {
    if (endpoints.size() < 2) throw InvalidArgument("an edge needs at least two endpoints");
    if (demand < 1 || payload < 1) throw InvalidArgument("demand must be positive");
    Level top = 0;
    for (std::size_t a = 0; a < endpoints.size(); ++a) {
      if (!has_vertex(endpoints[a])) throw InvalidArgument("unknown vertex " + std::to_string(endpoints[a]));
      for (std::size_t b = 0; b < a; ++b) {
        if (endpoints[a] == endpoints[b]) throw InvalidArgument("repeated endpoint " + std::to_string(endpoints[a]));
      }
      top = std::max(top, vertices_[endpoints[a]].level);
    }
    begin_event();
    const auto e = static_cast<EdgeId>(edges_.size());
    edges_.emplace_back();
    EdgeRecord& er = edges_.back();
    er.endpoints.assign(endpoints.begin(), endpoints.end());
    er.incidence.assign(endpoints.size(), -1);
    er.demand = demand;
    er.payload = payload;
    er.key = key;
    er.level = top;
    er.alive = true;
    for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
      const VertexId w = er.endpoints[s];
      er.incidence[s] = new_incidence(e, w);
      link_tail(er.incidence[s], top);
      auto& wr = vertices_[w];
      wr.profile.add(top, demand);
      ++wr.degree;
      mark(w);
    }
    set_owner(e, smallest_at_level(er, top, -1));
    phi_sum_ += phi(top, params_);
    lookup_[key].push_back(e);
    ++edge_count_;
    ++touched_total_;
    finish_event();
    return e;
  }

  void detach_edge(EdgeId e) {
    if (!edge_alive(e)) throw InvalidArgument("unknown edge " + std::to_string(e));
    begin_event();
    EdgeRecord& er = edges_[e];
    set_owner(e, -1);
    for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
      const VertexId w = er.endpoints[s];
      unlink(er.incidence[s]);
      free_incidence(er.incidence[s]);
      auto& wr = vertices_[w];
      wr.profile.remove(er.level, er.demand);
      --wr.degree;
      mark(w);
    }
    phi_sum_ -= phi(er.level, params_);
    auto& bucket = lookup_[er.key];
    bucket.erase(std::find(bucket.begin(), bucket.end(), e));
    if (bucket.empty()) lookup_.erase(er.key);
    er.alive = false;
    er.endpoints.clear();
    er.incidence.clear();
    --edge_count_;
    ++touched_total_;
    finish_event();
  }

  /// Moves v one level up. Every edge at level(v) follows to the new level and
  /// becomes owned by v. Returns the number of edges touched.
  std::int64_t raise(VertexId v) {
    auto& vr = vert_mut(v);
    const Level i = vr.level;
    if (i >= params_.levels) throw CorruptionError("vertex " + std::to_string(v) + " cannot rise above level L");
    begin_event();
    collect(v, i, scratch_);
    vr.level = i + 1;
    for (EdgeId e : scratch_) {
      relevel(e, i + 1);
      set_owner(e, v);
    }
    mark(v);
    const auto touched = static_cast<std::int64_t>(scratch_.size());
    touched_total_ += static_cast<std::uint64_t>(touched);
    finish_event();
    return touched;
  }

  /// Moves v one level down. Edges at level(v) drop with it unless another
  /// endpoint pins them; pinned edges owned by v change hands.
  std::int64_t lower(VertexId v) {
    auto& vr = vert_mut(v);
    const Level i = vr.level;
    if (i <= 0) throw InvalidArgument("vertex " + std::to_string(v) + " is already at level 0");
    begin_event();
    collect(v, i, scratch_);
    vr.level = i - 1;
    for (EdgeId e : scratch_) {
      EdgeRecord& er = edges_[e];
      Level other = 0;
      for (VertexId w : er.endpoints) {
        if (w != v) other = std::max(other, vertices_[w].level);
      }
      if (other < i) {
        if (er.owner != v) throw CorruptionError("edge at a unique-max endpoint is owned elsewhere");
        relevel(e, i - 1);
      } else if (er.owner == v) {
        set_owner(e, smallest_at_level(er, i, -1));
      }
    }
    mark(v);
    const auto touched = static_cast<std::int64_t>(scratch_.size());
    touched_total_ += static_cast<std::uint64_t>(touched);
    finish_event();
    return touched;
  }

  /// Vertices whose profile changed in the last structural mutation.
  const std::vector<VertexId>& affected() const { return affected_; }

  /// Resets every vertex to the given level and rebuilds all edge state.
  void assign_levels(std::span<const Level> levels_by_id) {
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (!vertices_[v].registered) continue;
      Level l = v < levels_by_id.size() ? levels_by_id[v] : 0;
      if (l < 0 || l > params_.levels) throw InvalidArgument("level out of range");
      vertices_[v].level = l;
    }
    rebuild_from_levels();
  }

  /// Sets every owner explicitly; each owner must attain its edge level.
  void set_owner_checked(EdgeId e, VertexId w) {
    const EdgeRecord& er = edge(e);
    if (std::find(er.endpoints.begin(), er.endpoints.end(), w) == er.endpoints.end() ||
        vertices_[w].level != er.level) {
      throw InvalidArgument("owner must be an endpoint at the edge level");
    }
    set_owner(e, w);
  }

  // ---- dirtiness --------------------------------------------------------------

  bool too_heavy(VertexId v) const {
    const auto& r = vert(v);
    return r.weight > r.attrs.cost * (1.0 + kGuardBand);
  }
  bool too_light(VertexId v) const {
    const auto& r = vert(v);
    return r.level > 0 && r.weight < params_.lower_threshold(r.attrs.cost) * (1.0 - kGuardBand);
  }
  bool is_dirty(VertexId v) const { return too_heavy(v) || too_light(v); }

  /// Queues v (FIFO) if it violates the maintenance band and is not queued yet.
  void screen(VertexId v) {
    auto& r = vert_mut(v);
    if (!r.queued && is_dirty(v)) {
      r.queued = true;
      dirty_.push_back(v);
    }
  }

  std::optional<VertexId> pop_dirty() {
    if (dirty_.empty()) return std::nullopt;
    VertexId v = dirty_.front();
    dirty_.pop_front();
    vertices_[v].queued = false;
    ++wall_ops_;
    return v;
  }

  std::size_t dirty_size() const { return dirty_.size(); }
  bool quiescent() const { return dirty_.empty(); }

  // ---- potential ------------------------------------------------------------------

  void enable_potential_tracking(bool on) {
    tracking_ = on;
    if (on) recompute_potential();
  }
  bool tracking_potential() const { return tracking_; }
  PotentialSnapshot potential() const { return make_snapshot(params_, phi_sum_, psi_sum_); }
  double bank() const { return (phi_sum_ + psi_sum_) / params_.epsilon; }

  // ---- counters -------------------------------------------------------------------

  /// Bumped by every mutation; ties extracted solutions to the state they came from.
  std::uint64_t stamp() const { return stamp_; }
  std::uint64_t wall_ops() const { return wall_ops_; }
  std::uint64_t touched_total() const { return touched_total_; }
  void charge_ops(std::uint64_t n) { wall_ops_ += n; }

  bool static_scheme() const { return static_scheme_; }
  void set_static_scheme(bool on) { static_scheme_ = on; }

  // ---- images ---------------------------------------------------------------------

  Image image() const {
    if (!quiescent()) throw Error("cannot snapshot a state with pending repairs");
    Image img;
    img.params = params_;
    std::vector<std::int32_t> compact(edges_.size(), -1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (!edges_[e].alive) continue;
      compact[e] = static_cast<std::int32_t>(img.edges.size());
      const auto& er = edges_[e];
      img.edges.push_back({er.endpoints, er.demand, er.payload, er.key, er.level, er.owner});
    }
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      const auto& r = vertices_[v];
      if (!r.registered) continue;
      img.vertices.push_back({r.attrs, r.level});
      for (Level i = 0; i <= params_.levels; ++i) {
        if (r.head[i] < 0) continue;
        BucketImage b{static_cast<VertexId>(v), i, {}};
        for (auto s = r.head[i]; s >= 0; s = incidences_[s].next) b.edges.push_back(compact[incidences_[s].edge]);
        img.buckets.push_back(std::move(b));
      }
    }
    img.stamp = stamp_;
    img.wall_ops = wall_ops_;
    img.touched_total = touched_total_;
    img.tracking = tracking_;
    img.phi_sum = phi_sum_;
    img.psi_sum = psi_sum_;
    img.static_scheme = static_scheme_;
    return img;
  }

  static GraphState from_image(const Image& img) {
    std::vector<VertexAttrs> attrs;
    for (const auto& v : img.vertices) attrs.push_back(v.attrs);
    GraphState g(img.params, attrs);
    for (const auto& v : img.vertices) g.vertices_[v.attrs.id].level = v.level;
    for (const auto& ei : img.edges) {
      EdgeRecord er;
      er.endpoints = ei.endpoints;
      er.incidence.assign(ei.endpoints.size(), -1);
      er.demand = ei.demand;
      er.payload = ei.payload;
      er.key = ei.key;
      er.level = ei.level;
      er.alive = true;
      for (VertexId w : er.endpoints) {
        if (!g.has_vertex(w)) throw CorruptionError("image edge references unknown vertex");
      }
      g.edges_.push_back(std::move(er));
    }
    for (const auto& b : img.buckets) {
      if (!g.has_vertex(b.vertex) || b.level < 0 || b.level > g.params_.levels) {
        throw CorruptionError("image bucket out of range");
      }
      for (auto ei : b.edges) {
        if (ei < 0 || static_cast<std::size_t>(ei) >= g.edges_.size()) throw CorruptionError("image bucket edge");
        EdgeRecord& er = g.edges_[ei];
        auto slot = std::find(er.endpoints.begin(), er.endpoints.end(), b.vertex) - er.endpoints.begin();
        if (static_cast<std::size_t>(slot) == er.endpoints.size() || er.incidence[slot] >= 0 ||
            er.level != b.level) {
          throw CorruptionError("image bucket disagrees with edge table");
        }
        er.incidence[slot] = g.new_incidence(ei, b.vertex);
        g.link_tail(er.incidence[slot], b.level);
        auto& wr = g.vertices_[b.vertex];
        wr.profile.add(b.level, er.demand);
        ++wr.degree;
      }
    }
    for (std::size_t e = 0; e < g.edges_.size(); ++e) {
      EdgeRecord& er = g.edges_[e];
      Level top = 0;
      for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
        if (er.incidence[s] < 0) throw CorruptionError("image edge missing from a bucket");
        top = std::max(top, g.vertices_[er.endpoints[s]].level);
      }
      if (top != er.level) throw CorruptionError("image edge level is not the max endpoint level");
      g.set_owner_checked(static_cast<EdgeId>(e), img.edges[e].owner);
      g.lookup_[er.key].push_back(static_cast<EdgeId>(e));
      ++g.edge_count_;
    }
    g.tracking_ = img.tracking;
    for (std::size_t v = 0; v < g.vertices_.size(); ++v) {
      if (g.vertices_[v].registered) g.refresh(static_cast<VertexId>(v));
    }
    g.phi_sum_ = img.phi_sum;
    g.psi_sum_ = img.psi_sum;
    g.stamp_ = img.stamp;
    g.wall_ops_ = img.wall_ops;
    g.touched_total_ = img.touched_total;
    g.static_scheme_ = img.static_scheme;
    return g;
  }

 private:
  struct Incidence {
    EdgeId edge = -1;
    VertexId vertex = -1;
    Level bucket = 0;
    std::int32_t prev = -1;
    std::int32_t next = -1;
  };

  struct VertexRecord {
    VertexAttrs attrs;
    bool registered = false;
    bool queued = false;
    Level level = 0;
    LevelProfile profile;
    std::vector<std::int32_t> head;
    std::vector<std::int32_t> tail;
    std::int64_t degree = 0;
    std::int64_t owned_count = 0;
    std::int64_t owned_demand = 0;
    std::int64_t owned_payload = 0;
    double weight = 0.0;
    double psi = 0.0;
    std::uint64_t mark = 0;
  };

  const VertexRecord& vert(VertexId v) const {
    if (!has_vertex(v)) throw InvalidArgument("unknown vertex " + std::to_string(v));
    return vertices_[v];
  }
  VertexRecord& vert_mut(VertexId v) {
    if (!has_vertex(v)) throw InvalidArgument("unknown vertex " + std::to_string(v));
    return vertices_[v];
  }

  void register_vertex(const VertexAttrs& a, bool check_budget) {
    if (a.id < 0) throw InvalidArgument("vertex ids must be non-negative");
    if (has_vertex(a.id)) throw InvalidArgument("duplicate vertex id " + std::to_string(a.id));
    if (check_budget && params_.mode != Mode::SetCover &&
        static_cast<std::int64_t>(vertex_count_) + 1 > params_.size_budget) {
      throw BudgetExceeded("vertex budget exhausted");
    }
    if (static_cast<std::size_t>(a.id) >= vertices_.size()) vertices_.resize(static_cast<std::size_t>(a.id) + 1);
    auto& r = vertices_[a.id];
    r = VertexRecord{};
    r.attrs = a;
    r.registered = true;
    const std::int64_t cap = params_.unbounded_capacity() ? kUnboundedCapacity : a.capacity;
    r.profile = LevelProfile(params_.levels, cap);
    r.head.assign(static_cast<std::size_t>(params_.levels) + 1, -1);
    r.tail.assign(static_cast<std::size_t>(params_.levels) + 1, -1);
    ++vertex_count_;
    ++stamp_;
  }

  std::int32_t new_incidence(EdgeId e, VertexId v) {
    std::int32_t s;
    if (!free_incidences_.empty()) {
      s = free_incidences_.back();
      free_incidences_.pop_back();
    } else {
      s = static_cast<std::int32_t>(incidences_.size());
      incidences_.emplace_back();
    }
    incidences_[s] = Incidence{e, v, 0, -1, -1};
    return s;
  }

  void free_incidence(std::int32_t s) { free_incidences_.push_back(s); }

  void link_tail(std::int32_t s, Level i) {
    auto& inc = incidences_[s];
    auto& r = vertices_[inc.vertex];
    inc.bucket = i;
    inc.prev = r.tail[i];
    inc.next = -1;
    if (r.tail[i] >= 0) {
      incidences_[r.tail[i]].next = s;
    } else {
      r.head[i] = s;
    }
    r.tail[i] = s;
    ++wall_ops_;
  }

  void unlink(std::int32_t s) {
    auto& inc = incidences_[s];
    auto& r = vertices_[inc.vertex];
    if (inc.prev >= 0) {
      incidences_[inc.prev].next = inc.next;
    } else {
      if (r.head[inc.bucket] != s) throw CorruptionError("bucket list head mismatch");
      r.head[inc.bucket] = inc.next;
    }
    if (inc.next >= 0) {
      incidences_[inc.next].prev = inc.prev;
    } else {
      if (r.tail[inc.bucket] != s) throw CorruptionError("bucket list tail mismatch");
      r.tail[inc.bucket] = inc.prev;
    }
    inc.prev = inc.next = -1;
    ++wall_ops_;
  }

  void collect(VertexId v, Level i, std::vector<EdgeId>& out) const {
    out.clear();
    const auto& r = vert(v);
    for (auto s = r.head[i]; s >= 0; s = incidences_[s].next) out.push_back(incidences_[s].edge);
  }

  void relevel(EdgeId e, Level to) {
    EdgeRecord& er = edges_[e];
    const Level from = er.level;
    for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
      const VertexId w = er.endpoints[s];
      if (incidences_[er.incidence[s]].bucket != from) throw CorruptionError("incidence outside its edge level");
      unlink(er.incidence[s]);
      link_tail(er.incidence[s], to);
      vertices_[w].profile.move(from, to, er.demand);
      mark(w);
    }
    phi_sum_ += phi(to, params_) - phi(from, params_);
    er.level = to;
  }

  VertexId smallest_at_level(const EdgeRecord& er, Level lvl, VertexId exclude) const {
    VertexId best = -1;
    for (VertexId w : er.endpoints) {
      if (w != exclude && vertices_[w].level == lvl && (best < 0 || w < best)) best = w;
    }
    if (best < 0) throw CorruptionError("no endpoint attains the edge level");
    return best;
  }

  void set_owner(EdgeId e, VertexId w) {
    EdgeRecord& er = edges_[e];
    if (er.owner == w) return;
    if (er.owner >= 0) {
      auto& o = vertices_[er.owner];
      --o.owned_count;
      o.owned_demand -= er.demand;
      o.owned_payload -= er.payload;
    }
    er.owner = w;
    if (w >= 0) {
      auto& o = vertices_[w];
      ++o.owned_count;
      o.owned_demand += er.demand;
      o.owned_payload += er.payload;
    }
    ++wall_ops_;
  }

  void begin_event() {
    ++epoch_;
    affected_.clear();
    ++stamp_;
  }

  void mark(VertexId v) {
    auto& r = vertices_[v];
    if (r.mark != epoch_) {
      r.mark = epoch_;
      affected_.push_back(v);
    }
  }

  void finish_event() {
    for (VertexId v : affected_) refresh(v);
  }

  /// Recomputes the cached weight (and psi) from the integer profile.
  void refresh(VertexId v) {
    auto& r = vertices_[v];
    r.weight = r.profile.weight(weights_);
    wall_ops_ += 1;
    if (tracking_) {
      const double p = psi(params_, r.attrs.cost, r.level, r.weight, r.degree > 0);
      psi_sum_ += p - r.psi;
      r.psi = p;
    }
  }

  void recompute_potential() {
    phi_sum_ = 0.0;
    psi_sum_ = 0.0;
    for (const auto& er : edges_) {
      if (er.alive) phi_sum_ += phi(er.level, params_);
    }
    for (auto& r : vertices_) {
      if (!r.registered) continue;
      r.psi = psi(params_, r.attrs.cost, r.level, r.weight, r.degree > 0);
      psi_sum_ += r.psi;
    }
  }

  void rebuild_from_levels() {
    ++stamp_;
    for (auto& r : vertices_) {
      if (!r.registered) continue;
      std::fill(r.head.begin(), r.head.end(), -1);
      std::fill(r.tail.begin(), r.tail.end(), -1);
      r.profile = LevelProfile(params_.levels, r.profile.capacity());
      r.degree = r.owned_count = r.owned_demand = r.owned_payload = 0;
      r.queued = false;
    }
    dirty_.clear();
    incidences_.clear();
    free_incidences_.clear();
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      EdgeRecord& er = edges_[e];
      if (!er.alive) continue;
      Level top = 0;
      for (VertexId w : er.endpoints) top = std::max(top, vertices_[w].level);
      er.level = top;
      er.owner = -1;
      for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
        er.incidence[s] = new_incidence(static_cast<EdgeId>(e), er.endpoints[s]);
        link_tail(er.incidence[s], top);
        auto& wr = vertices_[er.endpoints[s]];
        wr.profile.add(top, er.demand);
        ++wr.degree;
      }
      set_owner(static_cast<EdgeId>(e), smallest_at_level(er, top, -1));
    }
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (vertices_[v].registered) refresh(static_cast<VertexId>(v));
    }
    if (tracking_) recompute_potential();
  }

  Parameters params_;
  EdgeWeights weights_;
  std::vector<VertexRecord> vertices_;
  std::size_t vertex_count_ = 0;
  std::vector<EdgeRecord> edges_;
  std::size_t edge_count_ = 0;
  std::vector<Incidence> incidences_;
  std::vector<std::int32_t> free_incidences_;
  std::unordered_map<std::uint64_t, std::vector<EdgeId>> lookup_;
  std::deque<VertexId> dirty_;

  std::vector<EdgeId> scratch_;
  std::vector<VertexId> affected_;
  std::uint64_t epoch_ = 0;

  bool tracking_ = false;
  double phi_sum_ = 0.0;
  double psi_sum_ = 0.0;

  std::uint64_t stamp_ = 0;
  std::uint64_t wall_ops_ = 0;
  std::uint64_t touched_total_ = 0;
  bool static_scheme_ = false;
};

/// Builds a fresh instance: empty edge set, every vertex at level 0.
inline GraphState new_instance(std::span<const VertexAttrs> vertices, const InstanceConfig& cfg) {
  return GraphState(derive_parameters(cfg, vertices), vertices);
}

}  // namespace capvc
