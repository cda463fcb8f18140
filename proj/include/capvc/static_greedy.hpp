#pragma once

#include <utility>
#include <vector>

#include "capvc/graph_state.hpp"

namespace capvc {

/// True iff v can drop one level with every vertex staying within W_u <= c_u.
/// Evaluated by a trial drop that is rolled back, owners included.
inline bool can_drop(GraphState& g, VertexId v) {
  const Level i = g.level(v);
  if (i <= 0) throw InvalidArgument("can_drop needs a vertex above level 0");
  std::vector<std::pair<EdgeId, VertexId>> owners;
  for (EdgeId e : g.bucket(v, i)) owners.emplace_back(e, g.edge(e).owner);
  const bool tracking = g.tracking_potential();
  if (tracking) g.enable_potential_tracking(false);

  g.lower(v);
  bool ok = true;
  for (VertexId w : g.affected()) {
    if (g.too_heavy(w)) {
      ok = false;
      break;
    }
  }
  g.raise(v);
  for (const auto& [e, owner] : owners) g.set_owner_checked(e, owner);

  if (tracking) g.enable_potential_tracking(true);
  return ok;
}

/// Greedy drop-from-L on the loaded edge set. Vertices are visited round-robin
/// in id order, each dropping as far as validity allows, until a full pass makes
/// no move. The result is valid and non-improvable.
inline void solve_static_in_place(GraphState& g) {
  std::vector<Level> top(g.id_bound(), g.params().levels);
  g.assign_levels(top);
  const auto ids = g.vertex_ids();
  bool moved = true;
  while (moved) {
    moved = false;
    for (VertexId v : ids) {
      while (g.level(v) > 0 && can_drop(g, v)) {
        g.lower(v);
        moved = true;
      }
    }
  }
  g.set_static_scheme(true);
}

inline GraphState solve_static(GraphState instance) {
  solve_static_in_place(instance);
  return instance;
}

}  // namespace capvc
