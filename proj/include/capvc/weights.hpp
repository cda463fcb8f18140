#pragma once

#include "capvc/graph_state.hpp"

namespace capvc {

/// W_v as maintained by the state. Always re-derived from integer bucket loads.
inline double vertex_weight(const GraphState& g, VertexId v) { return g.weight(v); }

/// The part of W_v contributed by edges above level(v).
inline double external_component(const GraphState& g, VertexId v) {
  return g.profile(v).external(g.level(v), g.edge_weights());
}

/// Upper bound (1/(beta-1)) k_v mu beta^-level(v) on the external component.
inline double external_bound(const GraphState& g, VertexId v) {
  const auto& p = g.params();
  const double k = static_cast<double>(g.effective_capacity(v));
  return k * g.edge_weights()[g.level(v)] / (p.beta - 1.0);
}

/// Incident edges at edge level i; zero below level(v).
inline std::int64_t edge_level_degree(const GraphState& g, VertexId v, Level i) {
  if (i < 0 || i > g.params().levels) throw InvalidArgument("level out of range");
  return g.profile(v).edges_at(i);
}

/// psi(v) evaluated on the current state.
inline double psi(const GraphState& g, VertexId v) {
  return psi(g.params(), g.attrs(v).cost, g.level(v), g.weight(v), g.degree(v) > 0);
}

}  // namespace capvc
