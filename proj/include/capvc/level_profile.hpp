#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "capvc/types.hpp"

namespace capvc {

/// Edge weight per level: mu * beta^-i for i in [0, L].
class EdgeWeights {
 public:
  EdgeWeights() = default;
  EdgeWeights(double mu, double beta, Level levels) : w_(static_cast<std::size_t>(levels) + 1) {
    for (Level i = 0; i <= levels; ++i) w_[i] = mu * std::pow(beta, -static_cast<double>(i));
  }
  explicit EdgeWeights(const Parameters& p) : EdgeWeights(p.mu, p.beta, p.levels) {}

  double operator[](Level i) const { return w_[static_cast<std::size_t>(i)]; }
  Level top() const { return static_cast<Level>(w_.size()) - 1; }

 private:
  std::vector<double> w_;
};

/// Incident load of one vertex bucketed by edge level.
///
/// Bucket i holds the edges e ~ v with level(e) = i. Since an edge's level is the
/// max over its endpoints, buckets below the vertex's own level are always empty
/// and bucket level(v) holds D_v(0, level(v)). The vertex weight is then the
/// capacity-capped sum  W_v = sum_i min(k_v, load_i) * mu * beta^-i,  which is the
/// two-case definition folded into a single min.
class LevelProfile {
 public:
  LevelProfile() = default;
  LevelProfile(Level levels, std::int64_t capacity)
      : capacity_(capacity), load_(static_cast<std::size_t>(levels) + 1, 0),
        edges_(static_cast<std::size_t>(levels) + 1, 0) {}

  /// Builds the profile of a vertex at `own_level` whose neighbours sit at the given
  /// levels: neighbor_counts[j] = D_v(j). Unit demand per neighbour.
  static LevelProfile from_neighbor_levels(Level levels, std::int64_t capacity, Level own_level,
                                           std::span<const std::int64_t> neighbor_counts) {
    LevelProfile p(levels, capacity);
    for (std::size_t j = 0; j < neighbor_counts.size(); ++j) {
      Level at = std::max<Level>(own_level, static_cast<Level>(j));
      for (std::int64_t c = 0; c < neighbor_counts[j]; ++c) p.add(at, 1);
    }
    return p;
  }

  void add(Level i, std::int64_t demand) {
    load_[idx(i)] += demand;
    ++edges_[idx(i)];
  }

  void remove(Level i, std::int64_t demand) {
    if (edges_[idx(i)] <= 0 || load_[idx(i)] < demand) {
      throw CorruptionError("level profile: removing from an empty bucket");
    }
    load_[idx(i)] -= demand;
    --edges_[idx(i)];
  }

  void move(Level from, Level to, std::int64_t demand) {
    if (from == to) return;
    remove(from, demand);
    add(to, demand);
  }

  /// Neighbour u of v moved between levels; the edge follows to max(own, new).
  void on_neighbor_level_change(Level own_level, Level old_level, Level new_level) {
    move(std::max(own_level, old_level), std::max(own_level, new_level), 1);
  }

  std::int64_t capacity() const { return capacity_; }
  std::int64_t load_at(Level i) const { return load_[idx(i)]; }
  std::int64_t edges_at(Level i) const { return edges_[idx(i)]; }
  Level levels() const { return static_cast<Level>(load_.size()) - 1; }

  std::int64_t total_edges() const {
    std::int64_t s = 0;
    for (auto e : edges_) s += e;
    return s;
  }

  /// min(k_v, load) at level i.
  std::int64_t capped(Level i) const { return std::min(capacity_, load_[idx(i)]); }

  /// Highest level first so the small terms accumulate before the large ones.
  double weight(const EdgeWeights& w) const {
    double sum = 0.0;
    for (Level i = levels(); i >= 0; --i) {
      if (load_[idx(i)] != 0) sum += static_cast<double>(capped(i)) * w[i];
    }
    return sum;
  }

  double internal(Level own_level, const EdgeWeights& w) const {
    return static_cast<double>(capped(own_level)) * w[own_level];
  }

  double external(Level own_level, const EdgeWeights& w) const {
    double sum = 0.0;
    for (Level i = levels(); i > own_level; --i) {
      if (load_[idx(i)] != 0) sum += static_cast<double>(capped(i)) * w[i];
    }
    return sum;
  }

 private:
  static std::size_t idx(Level i) { return static_cast<std::size_t>(i); }

  std::int64_t capacity_ = 1;
  std::vector<std::int64_t> load_;
  std::vector<std::int64_t> edges_;
};

}  // namespace capvc
