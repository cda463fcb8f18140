#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "capvc/extract.hpp"
#include "capvc/graph_state.hpp"
#include "capvc/potential.hpp"

namespace capvc {

/// Plain covering instance, detached from any level scheme.
struct CoverInstance {
  struct Vertex {
    VertexId id = 0;
    double cost = 1.0;
    std::int64_t capacity = 1;
  };
  struct Edge {
    std::vector<VertexId> endpoints;
    std::int64_t demand = 1;
  };
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  /// Uncapacitated: one copy of a vertex covers all of its edges.
  bool unbounded = false;
};

/// Edges of g as the real instance sees them. Split replicas collapse back into
/// one edge of their total demand; cluster edges carry their original demand.
inline CoverInstance to_cover_instance(const GraphState& g) {
  CoverInstance inst;
  inst.unbounded = g.params().unbounded_capacity();
  for (VertexId v : g.vertex_ids()) inst.vertices.push_back({v, g.attrs(v).cost, g.attrs(v).capacity});
  const bool split = g.params().mode == Mode::DemandSplit;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  g.for_each_edge([&](EdgeId, const EdgeRecord& er) {
    if (split) {
      auto [it, fresh] = seen.emplace(er.key, inst.edges.size());
      if (!fresh) {
        inst.edges[it->second].demand += er.payload;
        return;
      }
    }
    inst.edges.push_back({er.endpoints, er.payload});
  });
  return inst;
}

struct OptResult {
  double cost = 0.0;
  /// Copies per vertex, indexed like CoverInstance::vertices.
  std::vector<std::int64_t> copies;
  /// Covering endpoint per edge (empty in the uncapacitated case).
  std::vector<VertexId> witness;
};

/// Search-space cap shared by the exhaustive solvers.
inline constexpr std::uint64_t kOracleBudget = 1ULL << 20;

namespace detail {

struct OracleIndex {
  std::unordered_map<VertexId, std::size_t> pos;
  explicit OracleIndex(const CoverInstance& inst) {
    for (std::size_t i = 0; i < inst.vertices.size(); ++i) pos.emplace(inst.vertices[i].id, i);
  }
  std::size_t at(VertexId v) const {
    auto it = pos.find(v);
    if (it == pos.end()) throw InvalidArgument("edge endpoint " + std::to_string(v) + " is not a vertex");
    return it->second;
  }
};

inline std::int64_t copies_for(std::int64_t load, std::int64_t k) { return load == 0 ? 0 : (load + k - 1) / k; }

inline OptResult uncapacitated_opt(const CoverInstance& inst, const OracleIndex& idx) {
  const std::size_t n = inst.vertices.size();
  if (n > 24) throw BudgetExceeded("subset enumeration limited to 24 vertices");
  std::vector<std::uint32_t> masks;
  for (const auto& e : inst.edges) {
    std::uint32_t m = 0;
    for (VertexId v : e.endpoints) m |= 1u << idx.at(v);
    masks.push_back(m);
  }
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_set = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    bool covers = true;
    for (auto m : masks) {
      if ((m & s) == 0) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s >> i & 1u) c += inst.vertices[i].cost;
    }
    if (c < best) {
      best = c;
      best_set = s;
    }
  }
  OptResult r;
  r.cost = best;
  r.copies.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) r.copies[i] = best_set >> i & 1u;
  return r;
}

}  // namespace detail

/// Exact optimum by walking every edge orientation, one edge at a time.
/// Orientations reaching the same residual spare capacities are merged, keeping
/// the cheaper (first found on ties); the distinct-state count is budgeted.
inline OptResult brute_force_opt(const CoverInstance& inst) {
  const detail::OracleIndex idx(inst);
  if (inst.unbounded) return detail::uncapacitated_opt(inst, idx);
  const std::size_t n = inst.vertices.size();
  const std::size_t m = inst.edges.size();

  // remaining[j][i]: demand on vertex i from edges j.. ; spare capacity above it is useless.
  std::vector<std::vector<std::int64_t>> remaining(m + 1, std::vector<std::int64_t>(n, 0));
  for (std::size_t j = m; j-- > 0;) {
    remaining[j] = remaining[j + 1];
    for (VertexId v : inst.edges[j].endpoints) remaining[j][idx.at(v)] += inst.edges[j].demand;
  }

  struct Node {
    std::vector<std::int64_t> spare;
    double cost;
    std::int32_t parent;
    std::int32_t choice;
  };
  std::vector<std::vector<Node>> layers(m + 1);
  layers[0].push_back({std::vector<std::int64_t>(n, 0), 0.0, -1, -1});
  for (std::size_t j = 0; j < m; ++j) {
    std::map<std::vector<std::int64_t>, std::int32_t> where;
    auto& next = layers[j + 1];
    const auto& e = inst.edges[j];
    for (std::size_t a = 0; a < layers[j].size(); ++a) {
      for (std::size_t s = 0; s < e.endpoints.size(); ++s) {
        const std::size_t i = idx.at(e.endpoints[s]);
        const auto& vx = inst.vertices[i];
        Node cand{layers[j][a].spare, layers[j][a].cost, static_cast<std::int32_t>(a), static_cast<std::int32_t>(s)};
        std::int64_t r = cand.spare[i];
        if (r < e.demand) {
          const std::int64_t extra = detail::copies_for(e.demand - r, vx.capacity);
          cand.cost += static_cast<double>(extra) * vx.cost;
          r += extra * vx.capacity;
        }
        r -= e.demand;
        for (std::size_t w = 0; w < n; ++w) cand.spare[w] = std::min(cand.spare[w], remaining[j + 1][w]);
        cand.spare[i] = std::min(r, remaining[j + 1][i]);
        auto it = where.find(cand.spare);
        if (it == where.end()) {
          where.emplace(cand.spare, static_cast<std::int32_t>(next.size()));
          next.push_back(std::move(cand));
          if (next.size() > kOracleBudget) throw BudgetExceeded("oracle state space over budget");
        } else if (cand.cost < next[it->second].cost) {
          next[it->second] = std::move(cand);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t a = 1; a < layers[m].size(); ++a) {
    if (layers[m][a].cost < layers[m][best].cost) best = a;
  }
  OptResult r;
  r.cost = layers[m][best].cost;
  r.witness.assign(m, -1);
  std::int32_t at = static_cast<std::int32_t>(best);
  for (std::size_t j = m; j > 0; --j) {
    const Node& nd = layers[j][at];
    r.witness[j - 1] = inst.edges[j - 1].endpoints[nd.choice];
    at = nd.parent;
  }
  std::vector<std::int64_t> load(n, 0);
  for (std::size_t j = 0; j < m; ++j) load[idx.at(r.witness[j])] += inst.edges[j].demand;
  r.copies.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) r.copies[i] = detail::copies_for(load[i], inst.vertices[i].capacity);
  return r;
}

/// Literal enumeration of all orientations, no merging. Small inputs only; used
/// to cross-check brute_force_opt.
inline OptResult enumerate_orientations(const CoverInstance& inst) {
  const detail::OracleIndex idx(inst);
  if (inst.unbounded) return detail::uncapacitated_opt(inst, idx);
  std::uint64_t space = 1;
  for (const auto& e : inst.edges) {
    space *= e.endpoints.size();
    if (space > kOracleBudget) throw BudgetExceeded("orientation space over budget");
  }
  const std::size_t n = inst.vertices.size();
  const std::size_t m = inst.edges.size();
  std::vector<std::size_t> pick(m, 0);
  std::vector<std::int64_t> load(n);
  OptResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t t = 0; t < space; ++t) {
    std::fill(load.begin(), load.end(), 0);
    for (std::size_t j = 0; j < m; ++j) load[idx.at(inst.edges[j].endpoints[pick[j]])] += inst.edges[j].demand;
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c += inst.vertices[i].cost * static_cast<double>(detail::copies_for(load[i], inst.vertices[i].capacity));
    }
    if (c < best.cost) {
      best.cost = c;
      best.witness.resize(m);
      for (std::size_t j = 0; j < m; ++j) best.witness[j] = inst.edges[j].endpoints[pick[j]];
      best.copies.resize(n);
      for (std::size_t i = 0; i < n; ++i) best.copies[i] = detail::copies_for(load[i], inst.vertices[i].capacity);
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (++pick[j] < inst.edges[j].endpoints.size()) break;
      pick[j] = 0;
    }
  }
  if (m == 0) best.copies.assign(n, 0);
  return best;
}

inline OptResult brute_force_opt(const GraphState& g) { return brute_force_opt(to_cover_instance(g)); }

inline constexpr double kOracleTolerance = 1e-9;

/// Every W_v recomputed from the raw edge list and vertex levels alone.
inline std::vector<double> scratch_weights(const GraphState& g) {
  const auto& p = g.params();
  const std::size_t rows = static_cast<std::size_t>(p.levels) + 1;
  std::vector<std::vector<std::int64_t>> load(g.id_bound(), std::vector<std::int64_t>(rows, 0));
  g.for_each_edge([&](EdgeId, const EdgeRecord& er) {
    Level top = 0;
    for (VertexId w : er.endpoints) top = std::max(top, g.level(w));
    for (VertexId w : er.endpoints) load[w][top] += er.demand;
  });
  std::vector<double> out(g.id_bound(), 0.0);
  for (VertexId v : g.vertex_ids()) {
    const std::int64_t k = p.unbounded_capacity() ? kUnboundedCapacity : g.attrs(v).capacity;
    double w = 0.0;
    for (Level i = p.levels; i >= 0; --i) {
      w += static_cast<double>(std::min(k, load[v][i])) * p.mu * std::pow(p.beta, -static_cast<double>(i));
    }
    out[v] = w;
  }
  return out;
}

inline double scratch_weight(const GraphState& g, VertexId v) {
  if (!g.has_vertex(v)) throw InvalidArgument("unknown vertex " + std::to_string(v));
  return scratch_weights(g)[v];
}

/// Band factor of the dynamic scheme before any set-cover f scaling.
inline double band_factor(const Parameters& p) {
  return p.mode == Mode::SetCover ? p.tightness() / p.f : p.tightness();
}

namespace detail {

inline std::string vertex_msg(VertexId v, const char* what, double w, double bound) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "vertex %d: %s (W=%.17g, bound=%.17g)", v, what, w, bound);
  return buf;
}

}  // namespace detail

/// Vertices with W_v > c_v.
inline std::vector<std::string> check_valid(const GraphState& g) {
  std::vector<std::string> out;
  const auto w = scratch_weights(g);
  for (VertexId v : g.vertex_ids()) {
    const double c = g.attrs(v).cost;
    if (w[v] > c * (1.0 + kOracleTolerance)) out.push_back(detail::vertex_msg(v, "weight above cost", w[v], c));
  }
  return out;
}

/// Validity plus the lower end of the maintenance band above level 0.
inline std::vector<std::string> check_invariant1(const GraphState& g) {
  auto out = check_valid(g);
  const auto w = scratch_weights(g);
  for (VertexId v : g.vertex_ids()) {
    const double lo = g.params().lower_threshold(g.attrs(v).cost);
    if (g.level(v) > 0 && w[v] < lo * (1.0 - kOracleTolerance)) {
      out.push_back(detail::vertex_msg(v, "weight below the lower threshold", w[v], lo));
    }
  }
  return out;
}

/// Every vertex owning an edge has W_v in (c_v / factor, c_v]; set cover widens
/// the band by f.
inline bool check_tightness(const GraphState& g, double factor) {
  const auto w = scratch_weights(g);
  const double scale = g.params().mode == Mode::SetCover ? factor * g.params().f : factor;
  for (VertexId v : g.vertex_ids()) {
    if (g.owned_count(v) == 0) continue;
    const double c = g.attrs(v).cost;
    if (w[v] > c * (1.0 + kOracleTolerance)) return false;
    if (!(w[v] > c / scale * (1.0 - kOracleTolerance))) return false;
  }
  return true;
}

/// No level-0 owners, and every edge reaches above level 0.
inline std::vector<std::string> check_no_level0_owner(const GraphState& g) {
  std::vector<std::string> out;
  g.for_each_edge([&](EdgeId e, const EdgeRecord& er) {
    if (er.owner >= 0 && g.level(er.owner) == 0) {
      out.push_back("edge " + std::to_string(e) + " owned by level-0 vertex " + std::to_string(er.owner));
    }
    bool high = false;
    for (VertexId w : er.endpoints) high = high || g.level(w) > 0;
    if (!high) out.push_back("edge " + std::to_string(e) + " has every endpoint at level 0");
  });
  return out;
}

/// Cross-checks every maintained table against the raw edges.
inline std::vector<std::string> check_structure(const GraphState& g) {
  std::vector<std::string> out;
  const auto& p = g.params();
  std::vector<std::int64_t> degree(g.id_bound(), 0), owned(g.id_bound(), 0);
  g.for_each_edge([&](EdgeId e, const EdgeRecord& er) {
    Level top = 0;
    for (VertexId w : er.endpoints) {
      top = std::max(top, g.level(w));
      ++degree[w];
    }
    const std::string tag = "edge " + std::to_string(e);
    if (er.level != top) out.push_back(tag + ": level is not the max endpoint level");
    if (std::find(er.endpoints.begin(), er.endpoints.end(), er.owner) == er.endpoints.end()) {
      out.push_back(tag + ": owner is not an endpoint");
    } else {
      if (g.level(er.owner) != er.level) out.push_back(tag + ": owner below the edge level");
      owned[er.owner] += er.demand;
    }
  });
  const auto w = scratch_weights(g);
  for (VertexId v : g.vertex_ids()) {
    const std::string tag = "vertex " + std::to_string(v);
    const auto& prof = g.profile(v);
    if (g.degree(v) != degree[v] || prof.total_edges() != degree[v]) out.push_back(tag + ": degree mismatch");
    if (g.owned_demand(v) != owned[v]) out.push_back(tag + ": owned demand mismatch");
    for (Level i = 0; i < g.level(v); ++i) {
      if (prof.edges_at(i) != 0) out.push_back(tag + ": edges below the vertex level");
    }
    std::int64_t listed = 0;
    for (Level i = 0; i <= p.levels; ++i) {
      const auto b = g.bucket(v, i);
      if (static_cast<std::int64_t>(b.size()) != prof.edges_at(i)) out.push_back(tag + ": bucket list disagrees with count");
      listed += static_cast<std::int64_t>(b.size());
    }
    if (listed != degree[v]) out.push_back(tag + ": bucket lists miss edges");
    const double scale = std::max(1.0, std::abs(w[v]));
    if (std::abs(g.weight(v) - w[v]) > kOracleTolerance * scale) {
      out.push_back(detail::vertex_msg(v, "maintained weight drifted", g.weight(v), w[v]));
    }
  }
  return out;
}

/// Both dual constraint families, with the demand form q_v d_e + l_ev >= pi_e.
inline std::vector<std::string> dual_violations(const DualCertificate& cert, const GraphState& g) {
  std::vector<std::string> out;
  if (cert.edges.size() != cert.l.size() || cert.edges.size() != cert.pi.size()) {
    out.push_back("certificate arrays have different lengths");
    return out;
  }
  std::vector<double> lsum(g.id_bound(), 0.0);
  for (std::size_t j = 0; j < cert.edges.size(); ++j) {
    const auto& er = g.edge(cert.edges[j]);
    const std::string tag = "edge " + std::to_string(cert.edges[j]);
    if (cert.l[j].size() != er.endpoints.size()) {
      out.push_back(tag + ": wrong number of l entries");
      continue;
    }
    if (cert.pi[j] < 0.0) out.push_back(tag + ": negative pi");
    for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
      const VertexId v = er.endpoints[s];
      const double q = v < static_cast<VertexId>(cert.q.size()) ? cert.q[v] : 0.0;
      if (cert.l[j][s] < 0.0) out.push_back(tag + ": negative l");
      lsum[v] += cert.l[j][s];
      if (q * static_cast<double>(er.demand) + cert.l[j][s] < cert.pi[j] - kOracleTolerance) {
        out.push_back(tag + ": edge constraint fails at vertex " + std::to_string(v));
      }
    }
  }
  for (VertexId v : g.vertex_ids()) {
    const double q = v < static_cast<VertexId>(cert.q.size()) ? cert.q[v] : 0.0;
    if (q < 0.0) out.push_back("vertex " + std::to_string(v) + ": negative q");
    double lhs = lsum[v];
    if (g.params().unbounded_capacity()) {
      if (q > 0.0) out.push_back("vertex " + std::to_string(v) + ": q must vanish without capacities");
    } else {
      lhs += static_cast<double>(g.attrs(v).capacity) * q;
    }
    if (lhs > g.attrs(v).cost + kOracleTolerance) {
      out.push_back(detail::vertex_msg(v, "vertex dual constraint fails", lhs, g.attrs(v).cost));
    }
  }
  return out;
}

inline bool check_dual_feasible(const DualCertificate& cert, const GraphState& g) {
  return dual_violations(cert, g).empty();
}

/// Owners selected, capacities respected, cost consistent, nothing at level 0.
inline std::vector<std::string> check_cover_feasible(const CoverSolution& cover, const GraphState& g) {
  std::vector<std::string> out;
  std::vector<std::int64_t> load(g.id_bound(), 0);
  for (std::size_t j = 0; j < cover.assignment.size(); ++j) {
    const auto& a = cover.assignment[j];
    if (std::find(a.endpoints.begin(), a.endpoints.end(), a.owner) == a.endpoints.end()) {
      out.push_back("assignment " + std::to_string(j) + " goes to a non-endpoint");
      continue;
    }
    load[a.owner] += a.demand;
  }
  double cost = 0.0;
  for (VertexId v : g.vertex_ids()) {
    const auto x = v < static_cast<VertexId>(cover.copies.size()) ? cover.copies[v] : 0;
    cost += g.attrs(v).cost * static_cast<double>(x);
    const std::string tag = "vertex " + std::to_string(v);
    if (load[v] > 0 && x < 1) out.push_back(tag + ": covers edges with no copy selected");
    if (!g.params().unbounded_capacity() && load[v] > g.attrs(v).capacity * x) {
      out.push_back(tag + ": capacity exceeded");
    }
    if (x > 0 && g.level(v) == 0) out.push_back(tag + ": selected at level 0");
  }
  if (std::abs(cost - cover.cost) > kOracleTolerance * std::max(1.0, cost)) out.push_back("cover cost mismatch");
  return out;
}

inline PotentialSnapshot potential_from_scratch(const GraphState& g) {
  const auto& p = g.params();
  double phi_sum = 0.0;
  g.for_each_edge([&](EdgeId, const EdgeRecord& er) {
    Level top = 0;
    for (VertexId w : er.endpoints) top = std::max(top, g.level(w));
    phi_sum += phi(top, p);
  });
  const auto w = scratch_weights(g);
  double psi_sum = 0.0;
  for (VertexId v : g.vertex_ids()) psi_sum += psi(p, g.attrs(v).cost, g.level(v), w[v], g.degree(v) > 0);
  return make_snapshot(p, phi_sum, psi_sum);
}

}  // namespace capvc
