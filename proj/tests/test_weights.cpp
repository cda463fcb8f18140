#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "capvc/dynamic.hpp"
#include "capvc/weights.hpp"
#include "support.hpp"

using namespace capvc;

namespace {

/// Vertex 0 (cost 4, so mu = 8) at `own` with neighbours placed at the given levels.
GraphState star_with_levels(std::int64_t k, Level own, const std::vector<std::int64_t>& per_level) {
  std::vector<VertexAttrs> vs{{0, 4.0, k}};
  std::vector<Level> levels{own};
  VertexId next = 1;
  for (std::size_t j = 0; j < per_level.size(); ++j) {
    for (std::int64_t c = 0; c < per_level[j]; ++c) {
      vs.push_back({next++, 4.0, 1});
      levels.push_back(static_cast<Level>(j));
    }
  }
  InstanceConfig cfg;
  cfg.beta = 2.0;
  cfg.epsilon = 0.05;
  cfg.size_budget = static_cast<std::int64_t>(vs.size());
  cfg.levels_override = 8;
  auto g = new_instance(vs, cfg);
  for (VertexId u = 1; u < next; ++u) {
    const VertexId ends[2] = {0, u};
    g.attach_edge(ends, 1, 1, pair_key(0, u));
  }
  g.assign_levels(levels);
  return g;
}

}  // namespace

TEST(VertexWeight, CaseOneExample) {
  auto g = star_with_levels(2, 1, {1, 2, 1, 5});
  ASSERT_DOUBLE_EQ(g.params().mu, 8.0);
  EXPECT_DOUBLE_EQ(vertex_weight(g, 0), 12.0);
  EXPECT_DOUBLE_EQ(vertex_weight(g, 0), testref::two_case_weight(8.0, 2.0, 2, 1, {0, 3, 1, 5}));
  EXPECT_DOUBLE_EQ(external_component(g, 0), 4.0);
  EXPECT_DOUBLE_EQ(external_bound(g, 0), 8.0);
  EXPECT_LE(external_component(g, 0), external_bound(g, 0));
  EXPECT_EQ(edge_level_degree(g, 0, 0), 0);
  EXPECT_EQ(edge_level_degree(g, 0, 1), 3);
  EXPECT_EQ(edge_level_degree(g, 0, 2), 1);
  EXPECT_EQ(edge_level_degree(g, 0, 3), 5);
}

TEST(VertexWeight, CaseTwoExample) {
  auto g = star_with_levels(2, 1, {0, 1, 4});
  EXPECT_DOUBLE_EQ(vertex_weight(g, 0), 8.0);
  EXPECT_DOUBLE_EQ(vertex_weight(g, 0), testref::two_case_weight(8.0, 2.0, 2, 1, {0, 1, 4}));
}

TEST(VertexWeight, IsolatedVertex) {
  auto g = star_with_levels(3, 2, {});
  EXPECT_EQ(vertex_weight(g, 0), 0.0);
  EXPECT_EQ(external_component(g, 0), 0.0);
  for (Level i = 0; i <= g.params().levels; ++i) EXPECT_EQ(edge_level_degree(g, 0, i), 0);
}

TEST(ExternalComponent, ZeroWhenNeighboursSitLower) {
  auto g = star_with_levels(2, 3, {2, 1, 0, 1});
  EXPECT_EQ(external_component(g, 0), 0.0);
}

TEST(ExternalComponent, GeometricTail) {
  // k = 1 and one neighbour at each level above own.
  const Level own = 2;
  std::vector<std::int64_t> per(9, 0);
  for (Level j = own + 1; j <= 8; ++j) per[j] = 1;
  auto g = star_with_levels(1, own, per);
  double tail = 0.0;
  for (Level j = own + 1; j <= 8; ++j) tail += 8.0 * std::pow(2.0, -j);
  EXPECT_NEAR(external_component(g, 0), tail, 1e-15);
  EXPECT_LT(external_component(g, 0), 8.0 * std::pow(2.0, -own));
}

TEST(EdgeLevelDegree, RejectsOutOfRange) {
  auto g = star_with_levels(1, 0, {1});
  EXPECT_THROW(edge_level_degree(g, 0, -1), InvalidArgument);
  EXPECT_THROW(edge_level_degree(g, 0, g.params().levels + 1), InvalidArgument);
}

TEST(NeighbourMove, CaseTwoSoleNeighbourMovesUp) {
  const Level own = 1;
  auto prof = LevelProfile(6, 2);
  prof.add(own, 1);
  EdgeWeights w(8.0, 2.0, 6);
  const double before = prof.weight(w);
  prof.on_neighbor_level_change(own, own, own + 1);
  EXPECT_DOUBLE_EQ(prof.weight(w) - before, 8.0 * (std::pow(2.0, -own - 1) - std::pow(2.0, -own)));

  // Same move through the state: raising the neighbour re-levels the edge.
  auto g = star_with_levels(2, own, {0, 1});
  const double w0 = g.weight(0);
  g.raise(1);
  EXPECT_DOUBLE_EQ(g.weight(0) - w0, 8.0 * (std::pow(2.0, -own - 1) - std::pow(2.0, -own)));
}

TEST(NeighbourMove, NoOpMove) {
  auto prof = LevelProfile(6, 2);
  prof.add(3, 1);
  EdgeWeights w(8.0, 2.0, 6);
  const double before = prof.weight(w);
  prof.on_neighbor_level_change(3, 3, 3);
  EXPECT_EQ(prof.weight(w), before);
}

TEST(NeighbourMove, SaturatedBelowOwnLevel) {
  // Case 1 vertex at level 3; a neighbour moving between levels 0 and 2 keeps the edge at 3.
  auto g = star_with_levels(2, 3, {2, 0, 1, 1});
  const double before = g.weight(0);
  g.raise(1);
  g.raise(1);
  EXPECT_EQ(g.weight(0), before);
}

TEST(NeighbourMove, InconsistentBucketIsCorruption) {
  auto prof = LevelProfile(4, 1);
  EXPECT_THROW(prof.remove(2, 1), CorruptionError);
  prof.add(1, 1);
  EXPECT_THROW(prof.on_neighbor_level_change(0, 3, 4), CorruptionError);
}

TEST(WeightProperties, MinMergedEqualsTwoCase) {
  capvc::cli::Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const Level L = static_cast<Level>(rng.between(1, 12));
    const auto k = rng.between(1, 5);
    const Level own = static_cast<Level>(rng.between(0, L));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(L) + 1);
    for (auto& c : counts) c = rng.below(3) == 0 ? 0 : rng.between(0, 7);
    const double beta = 1.0 + static_cast<double>(rng.between(1, 300)) / 100.0;
    const double mu = static_cast<double>(rng.between(2, 40));
    auto prof = LevelProfile::from_neighbor_levels(L, k, own, counts);
    EXPECT_NEAR(prof.weight(EdgeWeights(mu, beta, L)), testref::two_case_weight(mu, beta, k, own, counts),
                1e-12 * mu);
  }
}

TEST(WeightProperties, MonotoneAcrossAdjacentLevels) {
  capvc::cli::Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const Level L = static_cast<Level>(rng.between(2, 10));
    const auto k = rng.between(1, 4);
    const Level i = static_cast<Level>(rng.between(0, L - 1));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(L) + 1);
    for (auto& c : counts) c = rng.between(0, 5);
    const double beta = 1.0 + static_cast<double>(rng.between(5, 300)) / 100.0;
    EdgeWeights w(10.0, beta, L);
    const double lo = LevelProfile::from_neighbor_levels(L, k, i, counts).weight(w);
    const double hi = LevelProfile::from_neighbor_levels(L, k, i + 1, counts).weight(w);
    EXPECT_LE(lo, (beta + 1.0) * hi * (1 + 1e-12));
  }
}

TEST(WeightProperties, IncrementalMatchesScratch) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    capvc::cli::Rng rng(seed);
    auto vs = testref::random_vertices(rng, 10);
    InstanceConfig cfg;
    cfg.size_budget = 10;
    cfg.beta = 2.43;
    cfg.epsilon = 0.01;
    auto g = new_instance(vs, cfg);
    std::set<std::pair<VertexId, VertexId>> live;
    for (int t = 0; t < 200; ++t) {
      auto u = static_cast<VertexId>(rng.below(10)), v = static_cast<VertexId>(rng.below(10));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (live.erase({u, v})) {
        delete_edge(g, u, v);
      } else {
        live.insert({u, v});
        insert_edge(g, u, v);
      }
      for (auto x : g.vertex_ids()) {
        const double ref = testref::weight_from_edges(g, x);
        EXPECT_NEAR(g.weight(x), ref, 1e-9 * std::max(1.0, ref));
        EXPECT_LE(external_component(g, x), external_bound(g, x) * (1 + 1e-12));
      }
    }
  }
}
