#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "capvc/cli/parse.hpp"
#include "capvc/cli/snapshot.hpp"

namespace capvc::cli {

/// mt19937_64 with a rejection sampler, so streams do not depend on the
/// standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("empty sampling range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

enum class Family { ErdosChurn, SlidingWindow, StarAdversary, HyperChurn };

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "erdos-churn") return Family::ErdosChurn;
  if (s == "sliding-window") return Family::SlidingWindow;
  if (s == "star-adversary") return Family::StarAdversary;
  if (s == "hyper-churn") return Family::HyperChurn;
  return std::nullopt;
}

struct GenParams {
  Family family = Family::ErdosChurn;
  std::int64_t n = 8;
  /// Number of updates.
  std::int64_t T = 200;
  /// Window size (sliding-window).
  std::int64_t w = 500;
  /// Demands drawn from [1, max_demand] on inserts.
  std::int64_t max_demand = 1;
  /// Hyperedge size bound and pool size (hyper-churn).
  int f = 3;
  std::int64_t pool = 12;
  /// A query after every this many updates; 0 for none.
  std::int64_t query_every = 0;
  std::uint64_t seed = 1;
};

namespace detail {

inline StreamOp edge_op(bool insert, VertexId u, VertexId v, std::int64_t d = 1) {
  StreamOp op;
  op.kind = insert ? StreamOp::Kind::InsertEdge : StreamOp::Kind::DeleteEdge;
  op.u = u;
  op.v = v;
  op.demand = insert ? d : 1;
  return op;
}

inline std::pair<VertexId, VertexId> random_pair(Rng& rng, std::int64_t n) {
  const auto u = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n)));
  auto v = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n - 1)));
  if (v >= u) ++v;
  return {std::min(u, v), std::max(u, v)};
}

}  // namespace detail

inline std::vector<StreamOp> generate_stream(const GenParams& gp) {
  if (gp.n < 2) throw InvalidArgument("generators need at least two vertices");
  if (gp.T < 0) throw InvalidArgument("update count must be non-negative");
  if (gp.max_demand < 1) throw InvalidArgument("max demand must be positive");
  Rng rng(gp.seed);
  std::vector<StreamOp> ops;
  std::int64_t updates = 0;
  auto push = [&](StreamOp op) {
    ops.push_back(std::move(op));
    ++updates;
    if (gp.query_every > 0 && updates % gp.query_every == 0) ops.push_back(StreamOp{});
  };
  auto demand = [&] { return gp.max_demand > 1 ? rng.between(1, gp.max_demand) : std::int64_t{1}; };

  switch (gp.family) {
    case Family::ErdosChurn: {
      std::set<std::pair<VertexId, VertexId>> live;
      while (updates < gp.T) {
        auto e = detail::random_pair(rng, gp.n);
        if (live.erase(e)) {
          push(detail::edge_op(false, e.first, e.second));
        } else {
          live.insert(e);
          push(detail::edge_op(true, e.first, e.second, demand()));
        }
      }
      break;
    }
    case Family::SlidingWindow: {
      if (gp.w < 1 || gp.w >= gp.n * (gp.n - 1) / 2) throw InvalidArgument("window must lie in [1, n(n-1)/2)");
      std::set<std::pair<VertexId, VertexId>> live;
      std::deque<std::pair<VertexId, VertexId>> order;
      while (updates < gp.T) {
        std::pair<VertexId, VertexId> e;
        do {
          e = detail::random_pair(rng, gp.n);
        } while (live.count(e));
        live.insert(e);
        order.push_back(e);
        push(detail::edge_op(true, e.first, e.second, demand()));
        if (static_cast<std::int64_t>(order.size()) > gp.w && updates < gp.T) {
          auto old = order.front();
          order.pop_front();
          live.erase(old);
          push(detail::edge_op(false, old.first, old.second));
        }
      }
      break;
    }
    case Family::StarAdversary: {
      std::vector<VertexId> leaves;
      for (VertexId v = 1; v < gp.n; ++v) leaves.push_back(v);
      while (updates < gp.T) {
        rng.shuffle(leaves);
        std::vector<VertexId> in;
        for (VertexId v : leaves) {
          if (updates >= gp.T) break;
          push(detail::edge_op(true, 0, v, demand()));
          in.push_back(v);
        }
        rng.shuffle(in);
        for (VertexId v : in) {
          if (updates >= gp.T) break;
          push(detail::edge_op(false, 0, v));
        }
      }
      break;
    }
    case Family::HyperChurn: {
      if (gp.f < 2 || gp.f > gp.n) throw InvalidArgument("hyperedge size must lie in [2, n]");
      std::vector<std::vector<VertexId>> pool;
      std::set<std::vector<VertexId>> seen;
      std::int64_t attempts = 0;
      while (static_cast<std::int64_t>(pool.size()) < gp.pool && attempts++ < 100 * gp.pool) {
        const auto k = static_cast<std::size_t>(rng.between(2, gp.f));
        std::vector<VertexId> all;
        for (VertexId v = 0; v < gp.n; ++v) all.push_back(v);
        rng.shuffle(all);
        std::vector<VertexId> ends(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(ends.begin(), ends.end());
        if (seen.insert(ends).second) pool.push_back(ends);
      }
      std::vector<char> live(pool.size(), 0);
      while (updates < gp.T) {
        const auto i = rng.below(pool.size());
        StreamOp op;
        op.id = static_cast<std::int64_t>(i);
        if (live[i]) {
          op.kind = StreamOp::Kind::DeleteHyper;
        } else {
          op.kind = StreamOp::Kind::InsertHyper;
          op.endpoints = pool[i];
        }
        live[i] ^= 1;
        push(std::move(op));
      }
      break;
    }
  }
  return ops;
}

inline std::string format_stream(const std::vector<StreamOp>& ops) {
  std::string out;
  for (const auto& op : ops) out += format_op(op) + '\n';
  return out;
}

/// n vertices with integer costs in [1, 10] and capacities in [1, 3].
inline InstanceSpec generate_instance(std::int64_t n, std::uint64_t seed, InstanceConfig cfg) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  InstanceSpec spec;
  for (VertexId v = 0; v < n; ++v) {
    spec.vertices.push_back({v, static_cast<double>(rng.between(1, 10)), rng.between(1, 3)});
  }
  if (cfg.size_budget < 1) cfg.size_budget = n;
  spec.config = cfg;
  return spec;
}

/// Shortest decimal form that reads back to the same double.
inline std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_instance(const InstanceSpec& spec) {
  std::ostringstream os;
  const auto& c = spec.config;
  os << "param beta " << shortest(c.beta) << '\n';
  os << "param epsilon " << shortest(c.epsilon) << '\n';
  if (c.c_min) os << "param c_min " << shortest(*c.c_min) << '\n';
  if (c.c_max) os << "param c_max " << shortest(*c.c_max) << '\n';
  if (c.mode == Mode::DemandSplit) os << "param d_cap " << c.demand_cap << '\n';
  os << "mode " << to_string(c.mode);
  if (c.mode == Mode::SetCover) os << " f=" << c.f;
  os << '\n';
  os << "budget " << c.size_budget << '\n';
  for (const auto& v : spec.vertices) os << "vertex " << v.id << " cost=" << shortest(v.cost) << " cap=" << v.capacity << '\n';
  return os.str();
}

}  // namespace capvc::cli
