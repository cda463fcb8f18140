#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "capvc/graph_state.hpp"

namespace capvc {

struct AssignedEdge {
  std::vector<VertexId> endpoints;
  std::int64_t demand = 1;
  VertexId owner = -1;
};

/// Copy counts x_v (indexed by vertex id) and the edge assignment.
struct CoverSolution {
  std::vector<std::int64_t> copies;
  std::vector<AssignedEdge> assignment;
  double cost = 0.0;
  std::uint64_t stamp = 0;

  std::int64_t max_copies() const {
    std::int64_t h = 0;
    for (auto x : copies) h = std::max(h, x);
    return h;
  }
};

/// Feasible solution of the covering LP's dual. Entries of `l` and `pi` follow
/// `edges` (live edge ids in increasing order); `l[j][s]` belongs to endpoint s.
struct DualCertificate {
  std::vector<double> q;
  std::vector<EdgeId> edges;
  std::vector<std::vector<double>> l;
  std::vector<double> pi;
  double value = 0.0;
  std::uint64_t stamp = 0;
};

struct RatioReport {
  double cost = 0.0;
  double dual_lb = 0.0;
  double empirical_ratio = 1.0;
  double theoretical_ratio = 0.0;
  bool within_bound = true;
};

inline constexpr double kRatioSlack = 1e-6;

namespace detail {

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

inline void require_valid(const GraphState& g) {
  if (!g.quiescent()) throw Error("extraction requested while repairs are pending");
  for (VertexId v : g.vertex_ids()) {
    if (g.too_heavy(v)) throw Error("extraction requested on an invalid scheme");
  }
}

}  // namespace detail

/// One owner per edge and ceil(owned demand / k_v) copies per vertex.
inline CoverSolution current_cover(const GraphState& g) {
  detail::require_valid(g);
  CoverSolution sol;
  sol.stamp = g.stamp();
  sol.copies.assign(g.id_bound(), 0);
  for (VertexId v : g.vertex_ids()) {
    const auto owned = g.owned_demand(v);
    if (owned == 0) continue;
    sol.copies[v] = g.params().unbounded_capacity() ? 1 : detail::ceil_div(owned, g.attrs(v).capacity);
    sol.cost += g.attrs(v).cost * static_cast<double>(sol.copies[v]);
  }
  g.for_each_edge([&](EdgeId, const EdgeRecord& er) {
    sol.assignment.push_back({er.endpoints, er.demand, er.owner});
  });
  return sol;
}

/// Dual values read off the level scheme.
///
/// Multi-copy vertices put everything on q_v = mu beta^-level(v). The rest pay
/// per level: levels whose load exceeds k_v go into q_v, the others into l_ev.
/// Demand instances switch the comparison to >= and scale by d_e.
inline DualCertificate dual_certificate(const GraphState& g) {
  detail::require_valid(g);
  const auto& w = g.edge_weights();
  const bool demand_form = g.params().mode == Mode::DemandStatic;
  DualCertificate cert;
  cert.stamp = g.stamp();
  cert.q.assign(g.id_bound(), 0.0);

  std::vector<char> multi(g.id_bound(), 0);
  for (VertexId v : g.vertex_ids()) {
    const auto& prof = g.profile(v);
    const auto k = prof.capacity();
    const bool many = !g.params().unbounded_capacity() && detail::ceil_div(g.owned_demand(v), g.attrs(v).capacity) > 1;
    multi[v] = many ? 1 : 0;
    if (many) {
      cert.q[v] = w[g.level(v)];
      continue;
    }
    double q = 0.0;
    for (Level i = g.params().levels; i >= g.level(v); --i) {
      const auto load = prof.load_at(i);
      if (demand_form ? load >= k : load > k) q += w[i];
    }
    cert.q[v] = q;
  }

  g.for_each_edge([&](EdgeId e, const EdgeRecord& er) {
    const double pi = static_cast<double>(er.demand) * w[er.level];
    std::vector<double> l(er.endpoints.size(), 0.0);
    for (std::size_t s = 0; s < er.endpoints.size(); ++s) {
      const VertexId v = er.endpoints[s];
      if (multi[v]) continue;
      const auto& prof = g.profile(v);
      const auto load = prof.load_at(er.level);
      const bool saturated = demand_form ? load >= prof.capacity() : load > prof.capacity();
      if (!saturated) l[s] = pi;
    }
    cert.edges.push_back(e);
    cert.l.push_back(std::move(l));
    cert.pi.push_back(pi);
    cert.value += pi;
  });
  return cert;
}

/// Ratio guaranteed for the scheme the state currently holds.
inline double scheme_ratio(const GraphState& g) {
  return g.static_scheme() ? static_ratio(g.params()) : theoretical_ratio(g.params());
}

inline RatioReport ratio_report(const GraphState& g, const CoverSolution& cover, const DualCertificate& cert) {
  if (cover.stamp != cert.stamp || cover.stamp != g.stamp()) {
    throw InvalidArgument("cover and certificate come from different states");
  }
  RatioReport r;
  r.cost = cover.cost;
  r.dual_lb = cert.value;
  r.theoretical_ratio = scheme_ratio(g);
  if (cert.value > 0.0) {
    r.empirical_ratio = cover.cost / cert.value;
  } else {
    r.empirical_ratio = cover.cost > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  r.within_bound = cover.cost <= r.theoretical_ratio * cert.value + kRatioSlack;
  return r;
}

}  // namespace capvc
