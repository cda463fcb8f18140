#pragma once

// Reference computations for the tests. Nothing here calls into the library's
// own weight, ratio or optimum code, so agreement is a real cross-check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "capvc/cli/generate.hpp"
#include "capvc/dynamic.hpp"
#include "capvc/graph_state.hpp"

namespace testref {

using capvc::Level;
using capvc::VertexId;

/// Paper-style weight with its two cases written out separately.
/// below[i] holds D_v(i): neighbours whose own level is i.
inline double two_case_weight(double mu, double beta, std::int64_t k, Level own, const std::vector<std::int64_t>& below) {
  std::int64_t prefix = 0;
  for (Level i = 0; i <= own && i < static_cast<Level>(below.size()); ++i) prefix += below[i];
  double w = 0.0;
  if (prefix > k) {
    w = static_cast<double>(k) * mu * std::pow(beta, -own);
  } else {
    w = static_cast<double>(prefix) * mu * std::pow(beta, -own);
  }
  for (Level j = own + 1; j < static_cast<Level>(below.size()); ++j) {
    w += static_cast<double>(std::min(k, below[j])) * mu * std::pow(beta, -j);
  }
  return w;
}

struct Edge {
  std::vector<VertexId> ends;
  std::int64_t demand = 1;
};

struct Vertex {
  VertexId id;
  double cost;
  std::int64_t cap;
};

/// Plain orientation enumeration; ceil(load/k) copies per vertex.
inline double naive_opt(const std::vector<Vertex>& vs, const std::vector<Edge>& es) {
  std::map<VertexId, std::size_t> at;
  for (std::size_t i = 0; i < vs.size(); ++i) at[vs[i].id] = i;
  std::vector<std::size_t> choice(es.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::int64_t> load(vs.size(), 0);
    for (std::size_t j = 0; j < es.size(); ++j) load[at[es[j].ends[choice[j]]]] += es[j].demand;
    double c = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) c += vs[i].cost * static_cast<double>((load[i] + vs[i].cap - 1) / vs[i].cap);
    best = std::min(best, c);
    std::size_t j = 0;
    while (j < es.size() && ++choice[j] == es[j].ends.size()) choice[j++] = 0;
    if (j == es.size()) break;
  }
  return best;
}

/// Cheapest vertex subset touching every edge.
inline double naive_subset_opt(const std::vector<Vertex>& vs, const std::vector<Edge>& es) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t s = 0; s < (1u << vs.size()); ++s) {
    std::set<VertexId> pick;
    double c = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (s >> i & 1u) {
        pick.insert(vs[i].id);
        c += vs[i].cost;
      }
    }
    bool ok = true;
    for (const auto& e : es) {
      bool hit = false;
      for (auto v : e.ends) hit = hit || pick.count(v);
      ok = ok && hit;
    }
    if (ok) best = std::min(best, c);
  }
  return best;
}

/// Live edges of a state in the reference form.
inline std::vector<Edge> live_edges(const capvc::GraphState& g) {
  std::vector<Edge> out;
  g.for_each_edge([&](capvc::EdgeId, const capvc::EdgeRecord& er) { out.push_back({er.endpoints, er.payload}); });
  return out;
}

inline std::vector<Vertex> vertices_of(const capvc::GraphState& g) {
  std::vector<Vertex> out;
  for (auto v : g.vertex_ids()) out.push_back({v, g.attrs(v).cost, g.attrs(v).capacity});
  return out;
}

/// Weight of v recomputed from raw edges by the two-case formula.
inline double weight_from_edges(const capvc::GraphState& g, VertexId v) {
  const auto& p = g.params();
  std::vector<std::int64_t> demand_at(static_cast<std::size_t>(p.levels) + 1, 0);
  const Level own = g.level(v);
  g.for_each_edge([&](capvc::EdgeId, const capvc::EdgeRecord& er) {
    if (std::find(er.endpoints.begin(), er.endpoints.end(), v) == er.endpoints.end()) return;
    Level top = 0;
    for (auto w : er.endpoints) top = std::max(top, g.level(w));
    demand_at[top] += er.demand;
  });
  // Edge levels never fall below own, so bucket own already is the prefix.
  return two_case_weight(p.mu, p.beta, g.effective_capacity(v), own, demand_at);
}

inline std::vector<capvc::VertexAttrs> random_vertices(capvc::cli::Rng& rng, int n, int cost_hi = 10, int cap_hi = 3) {
  std::vector<capvc::VertexAttrs> vs;
  for (int v = 0; v < n; ++v) vs.push_back({v, static_cast<double>(rng.between(1, cost_hi)), rng.between(1, cap_hi)});
  return vs;
}

inline std::vector<std::pair<VertexId, VertexId>> random_simple_edges(capvc::cli::Rng& rng, int n, int m) {
  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<std::pair<VertexId, VertexId>> out;
  m = std::min(m, n * (n - 1) / 2);
  while (static_cast<int>(out.size()) < m) {
    auto u = static_cast<VertexId>(rng.below(n));
    auto v = static_cast<VertexId>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.insert({u, v}).second) out.push_back({u, v});
  }
  return out;
}

inline std::string fixture(const std::string& name) { return std::string(CAPVC_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testref
