#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <thread>
#include <vector>

#include "capvc/dynamic.hpp"
#include "capvc/extract.hpp"
#include "support.hpp"

using namespace capvc;

namespace {

std::vector<VertexAttrs> pair_instance() { return {{0, 1.0, 1}, {1, 1.0, 1}}; }

InstanceConfig config(double beta, double eps, std::int64_t budget, Mode mode = Mode::Capacitated) {
  InstanceConfig c;
  c.beta = beta;
  c.epsilon = eps;
  c.size_budget = budget;
  c.mode = mode;
  return c;
}

double ref_alpha(double beta, double eps) { return (2 * beta + 1) / beta + 2 * eps; }

}  // namespace

TEST(Parameters, TwoVertexDerivation) {
  auto vs = pair_instance();
  auto g = new_instance(vs, config(2.0, 0.05, 2));
  const auto& p = g.params();
  const double alpha = ref_alpha(2.0, 0.05);
  EXPECT_DOUBLE_EQ(p.mu, 2.0);
  EXPECT_NEAR(p.alpha, 2.6, 1e-12);
  EXPECT_NEAR(p.alpha, alpha, 1e-12);
  EXPECT_EQ(p.levels, static_cast<Level>(std::ceil(std::log2(2 * 2 * alpha / 1.0))));
  EXPECT_EQ(p.levels, 4);
  EXPECT_GT(p.mu, p.c_max);
  EXPECT_GE(p.alpha, p.beta / (p.beta - 1));
  for (auto v : g.vertex_ids()) {
    EXPECT_EQ(g.level(v), 0);
    EXPECT_EQ(g.weight(v), 0.0);
  }
  EXPECT_TRUE(g.quiescent());
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Parameters, AlphaAtPaperBeta) {
  auto vs = pair_instance();
  auto g = new_instance(vs, config(2.43, 0.01, 2));
  EXPECT_NEAR(g.params().alpha, 2.4315, 5e-5);
  EXPECT_NEAR(g.params().alpha, ref_alpha(2.43, 0.01), 1e-12);
}

TEST(Parameters, WeightedModeOverridesBeta) {
  auto vs = pair_instance();
  auto g = new_instance(vs, config(3.0, 0.1, 2, Mode::WeightedVC));
  EXPECT_NEAR(g.params().beta, 1.1, 1e-12);
  EXPECT_NEAR(g.params().alpha, 1.3, 1e-12);
}

TEST(Parameters, SetCoverLevelsUseHyperedgeBudget) {
  std::vector<VertexAttrs> vs{{0, 1.0, 1}, {1, 2.0, 1}, {2, 1.0, 2}};
  auto cfg = config(2.0, 0.05, 12, Mode::SetCover);
  cfg.f = 3;
  auto g = new_instance(vs, cfg);
  const auto& p = g.params();
  EXPECT_EQ(p.levels, static_cast<Level>(std::ceil(std::log(12 * 4.0 * ref_alpha(2.0, 0.05) / 1.0) / std::log(2.0))));
}

TEST(Parameters, Deterministic) {
  auto vs = pair_instance();
  auto a = new_instance(vs, config(2.43, 0.01, 2)).params();
  auto b = new_instance(vs, config(2.43, 0.01, 2)).params();
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.levels, b.levels);
}

TEST(Parameters, RejectsBadInput) {
  auto vs = pair_instance();
  EXPECT_THROW(new_instance(vs, config(1.0, 0.05, 2)), InvalidArgument);
  EXPECT_THROW(new_instance(vs, config(0.5, 0.05, 2)), InvalidArgument);
  EXPECT_THROW(new_instance(vs, config(2.0, 0.0, 2)), InvalidArgument);
  EXPECT_THROW(new_instance(vs, config(2.0, 1.0, 2)), InvalidArgument);
  EXPECT_THROW(new_instance(vs, config(2.0, 0.05, 1)), InvalidArgument);

  std::vector<VertexAttrs> bad_cost{{0, 0.0, 1}, {1, 1.0, 1}};
  EXPECT_THROW(new_instance(bad_cost, config(2.0, 0.05, 2)), InvalidArgument);
  std::vector<VertexAttrs> bad_cap{{0, 1.0, 0}, {1, 1.0, 1}};
  EXPECT_THROW(new_instance(bad_cap, config(2.0, 0.05, 2)), InvalidArgument);
  std::vector<VertexAttrs> dup{{0, 1.0, 1}, {0, 1.0, 1}};
  EXPECT_THROW(new_instance(dup, config(2.0, 0.05, 2)), InvalidArgument);
}

TEST(TheoreticalRatio, Values) {
  auto vs = pair_instance();
  auto r = [&](double beta, double eps) { return theoretical_ratio(new_instance(vs, config(beta, eps, 2)).params()); };
  auto ref = [](double beta, double eps) {
    const double tau = ref_alpha(beta, eps) * (beta + 1);
    return tau * (2 * beta / (beta - 1) + 1);
  };
  EXPECT_NEAR(r(2.0, 0.05), 39.0, 1e-9);
  EXPECT_NEAR(r(2.43, 0.01), ref(2.43, 0.01), 1e-9);
  EXPECT_NEAR(r(2.43, 0.01), 36.69, 1e-2);
  EXPECT_NEAR(r(2.43, 1e-9), 36.38, 5e-3);
  EXPECT_NEAR(new_instance(vs, config(2.43, 1e-9, 2)).params().alpha, 2.41152, 5e-6);
}

TEST(Vertices, AddIsolatedVertex) {
  std::vector<VertexAttrs> vs{{0, 1.0, 1}, {1, 2.0, 1}};
  auto g = new_instance(vs, config(2.0, 0.05, 3));
  g.add_vertex({2, 1.5, 2});
  EXPECT_TRUE(g.has_vertex(2));
  EXPECT_EQ(g.level(2), 0);
  EXPECT_EQ(g.weight(2), 0.0);
  EXPECT_TRUE(g.quiescent());
}

TEST(Vertices, AddOutsideBandOrBudgetFails) {
  std::vector<VertexAttrs> vs{{0, 1.0, 1}, {1, 2.0, 1}};
  auto g = new_instance(vs, config(2.0, 0.05, 3));
  EXPECT_THROW(g.add_vertex({2, 2.5, 1}), InvalidArgument);
  EXPECT_THROW(g.add_vertex({2, 0.5, 1}), InvalidArgument);
  EXPECT_THROW(g.add_vertex({1, 1.0, 1}), InvalidArgument);
  g.add_vertex({2, 1.0, 1});
  EXPECT_THROW(g.add_vertex({3, 1.0, 1}), BudgetExceeded);
}

TEST(Vertices, LateVertexMatchesUpfront) {
  std::vector<VertexAttrs> all{{0, 1.0, 1}, {1, 2.0, 2}, {2, 1.5, 1}};
  auto cfg = config(2.0, 0.05, 3);
  cfg.c_min = 1.0;
  cfg.c_max = 2.0;
  auto upfront = new_instance(all, cfg);
  std::vector<VertexAttrs> first(all.begin(), all.begin() + 2);
  auto late = new_instance(first, cfg);
  late.add_vertex(all[2]);
  ASSERT_EQ(upfront.params().levels, late.params().levels);
  for (auto [u, v] : std::vector<std::pair<VertexId, VertexId>>{{0, 2}, {1, 2}, {0, 1}}) {
    insert_edge(upfront, u, v);
    insert_edge(late, u, v);
  }
  for (VertexId v = 0; v < 3; ++v) {
    EXPECT_EQ(upfront.level(v), late.level(v));
    EXPECT_EQ(upfront.weight(v), late.weight(v));
    EXPECT_EQ(upfront.owned_count(v), late.owned_count(v));
  }
}

TEST(Structure, EdgeLevelsAndOwnersAfterChurn) {
  capvc::cli::Rng rng(99);
  auto vs = testref::random_vertices(rng, 9);
  auto g = new_instance(vs, config(2.0, 0.05, 9));
  std::set<std::pair<VertexId, VertexId>> live;
  for (int t = 0; t < 300; ++t) {
    auto u = static_cast<VertexId>(rng.below(9)), v = static_cast<VertexId>(rng.below(9));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (live.erase({u, v})) {
      delete_edge(g, u, v);
    } else {
      live.insert({u, v});
      insert_edge(g, u, v);
    }
    std::vector<std::int64_t> degree(9, 0);
    g.for_each_edge([&](EdgeId, const EdgeRecord& er) {
      Level top = 0;
      for (auto w : er.endpoints) {
        top = std::max(top, g.level(w));
        ++degree[w];
      }
      EXPECT_EQ(er.level, top);
      EXPECT_EQ(g.level(er.owner), top);
    });
    for (VertexId w = 0; w < 9; ++w) {
      EXPECT_EQ(g.degree(w), degree[w]);
      std::int64_t sum = 0;
      for (Level i = 0; i <= g.params().levels; ++i) {
        sum += g.profile(w).edges_at(i);
        EXPECT_EQ(static_cast<std::int64_t>(g.bucket(w, i).size()), g.profile(w).edges_at(i));
      }
      EXPECT_EQ(sum, degree[w]);
      EXPECT_GE(g.level(w), 0);
      EXPECT_LE(g.level(w), g.params().levels);
    }
  }
}

TEST(Structure, LevelZeroEdgeOutweighsEveryCost) {
  std::vector<VertexAttrs> vs{{0, 3.0, 1}, {1, 7.0, 1}};
  auto g = new_instance(vs, config(2.0, 0.05, 2));
  EXPECT_GT(g.edge_weights()[0], 7.0);
}

TEST(Structure, TieBreakPicksSmallerId) {
  std::vector<VertexAttrs> vs{{0, 4.0, 1}, {1, 4.0, 1}, {2, 4.0, 1}};
  auto g = new_instance(vs, config(2.0, 0.05, 3));
  std::vector<Level> lv{2, 2, 0};
  g.assign_levels(lv);
  const VertexId ends[2] = {1, 0};
  const EdgeId e = g.attach_edge(ends, 1, 1, pair_key(0, 1));
  EXPECT_EQ(g.edge(e).owner, 0);
}

TEST(Structure, MovesBetweenThreads) {
  auto vs = pair_instance();
  auto g = new_instance(vs, config(2.0, 0.05, 2));
  std::thread th([&] { insert_edge(g, 0, 1); });
  th.join();
  EXPECT_EQ(g.edge_count(), 1u);
}
