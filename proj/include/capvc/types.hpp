#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capvc {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using Level = std::int32_t;

/// Capacity used by the uncapacitated (weighted vertex cover) mode.
inline constexpr std::int64_t kUnboundedCapacity = std::numeric_limits<std::int64_t>::max();

/// Relative guard band applied to both dirtiness thresholds.
inline constexpr double kGuardBand = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: parameters, unknown vertices, duplicate edges.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Internal bookkeeping disagreed with itself; the state cannot be trusted.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// A declared size budget (vertices, hyperedges, oracle search space) was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

enum class Mode { Capacitated, WeightedVC, SetCover, DemandStatic, DemandCluster, DemandSplit };

inline std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Capacitated: return "Capacitated";
    case Mode::WeightedVC: return "WeightedVC";
    case Mode::SetCover: return "SetCover";
    case Mode::DemandStatic: return "DemandStatic";
    case Mode::DemandCluster: return "DemandCluster";
    case Mode::DemandSplit: return "DemandSplit";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::Capacitated, Mode::WeightedVC, Mode::SetCover, Mode::DemandStatic,
                 Mode::DemandCluster, Mode::DemandSplit}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

struct VertexAttrs {
  VertexId id = 0;
  double cost = 1.0;
  std::int64_t capacity = 1;
};

/// Everything needed to derive Parameters for a fresh instance.
struct InstanceConfig {
  Mode mode = Mode::Capacitated;
  double beta = 2.0;
  double epsilon = 0.05;
  /// n for vertex-cover modes, the live hyperedge budget m_max for SetCover.
  std::int64_t size_budget = 0;
  int f = 2;
  /// Declared cost band; defaults to the min/max over the initial vertices.
  std::optional<double> c_min;
  std::optional<double> c_max;
  /// Largest demand accepted in DemandSplit mode.
  std::int64_t demand_cap = 64;
  /// Testing hooks: replace the derived alpha or level count.
  std::optional<double> alpha_override;
  std::optional<Level> levels_override;
};

struct Parameters {
  double beta = 2.0;
  double epsilon = 0.05;
  double mu = 2.0;
  double alpha = 2.6;
  Level levels = 1;
  Mode mode = Mode::Capacitated;
  int f = 2;
  double c_min = 1.0;
  double c_max = 1.0;
  std::int64_t size_budget = 0;
  std::int64_t k_max = 1;
  std::int64_t demand_cap = 64;

  bool unbounded_capacity() const { return mode == Mode::WeightedVC; }

  /// Factor tau of the maintained band (c_v / tau, c_v]. SetCover carries the extra f.
  double tightness() const {
    switch (mode) {
      case Mode::WeightedVC: return alpha * beta;
      case Mode::SetCover: return f * alpha * (beta + 1.0);
      default: return alpha * (beta + 1.0);
    }
  }

  /// c_v^* of the maintenance band.
  double lower_threshold(double cost) const { return cost / tightness(); }

  /// Coefficient of the per-edge potential phi(e) = coef * (L - level(e)).
  double phi_coefficient() const {
    if (mode == Mode::WeightedVC) return 1.0 + epsilon;
    return beta / (beta - 1.0) + epsilon;
  }
};

namespace detail {

inline Level ceil_log(double x, double base) {
  if (x <= 1.0) return 1;
  double l = std::ceil(std::log(x) / std::log(base));
  return std::max<Level>(1, static_cast<Level>(l));
}

}  // namespace detail

inline double capacitated_alpha(double beta, double epsilon) {
  return (2.0 * beta + 1.0) / beta + 2.0 * epsilon;
}

/// Derives mu, alpha and the level count from the instance configuration.
inline Parameters derive_parameters(const InstanceConfig& cfg, std::span<const VertexAttrs> vertices) {
  if (vertices.empty()) throw InvalidArgument("instance needs at least one vertex");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (cfg.mode != Mode::WeightedVC && !(cfg.beta > 1.0)) throw InvalidArgument("beta must exceed 1");
  if (cfg.mode == Mode::SetCover && cfg.f < 2) throw InvalidArgument("set cover needs f >= 2");

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::int64_t k_max = 1;
  std::vector<VertexId> ids;
  for (const auto& v : vertices) {
    if (!(v.cost > 0.0) || !std::isfinite(v.cost)) throw InvalidArgument("vertex cost must be positive");
    if (v.capacity < 1) throw InvalidArgument("vertex capacity must be >= 1");
    if (v.id < 0) throw InvalidArgument("vertex ids must be non-negative");
    lo = std::min(lo, v.cost);
    hi = std::max(hi, v.cost);
    k_max = std::max(k_max, v.capacity);
    ids.push_back(v.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw InvalidArgument("duplicate vertex id");

  Parameters p;
  p.mode = cfg.mode;
  p.f = cfg.mode == Mode::SetCover ? cfg.f : 2;
  p.epsilon = cfg.epsilon;
  p.c_min = cfg.c_min.value_or(lo);
  p.c_max = cfg.c_max.value_or(hi);
  if (!(p.c_min > 0.0) || p.c_min > lo || p.c_max < hi) {
    throw InvalidArgument("declared cost band does not contain every vertex cost");
  }
  p.mu = 2.0 * p.c_max;
  p.k_max = k_max;
  p.demand_cap = cfg.demand_cap;
  if (p.demand_cap < 1) throw InvalidArgument("demand cap must be >= 1");

  switch (cfg.mode) {
    case Mode::WeightedVC:
      p.beta = 1.0 + cfg.epsilon;
      p.alpha = 1.0 + 3.0 * cfg.epsilon;
      break;
    case Mode::DemandCluster:
      p.beta = cfg.beta;
      p.alpha = 2.0 * capacitated_alpha(cfg.beta, cfg.epsilon);
      break;
    default:
      p.beta = cfg.beta;
      p.alpha = capacitated_alpha(cfg.beta, cfg.epsilon);
      break;
  }
  if (cfg.alpha_override) p.alpha = *cfg.alpha_override;

  const auto n = static_cast<std::int64_t>(vertices.size());
  std::int64_t budget = cfg.size_budget;
  if (cfg.mode != Mode::SetCover && budget < n) {
    throw InvalidArgument("size budget smaller than the vertex count");
  }
  if (budget < 1) throw InvalidArgument("size budget must be positive");
  p.size_budget = budget;

  double scale = static_cast<double>(budget);
  if (cfg.mode == Mode::DemandStatic) scale = static_cast<double>(k_max);
  // Parallel replicas can push a vertex's incident count past n.
  if (cfg.mode == Mode::DemandSplit) scale = static_cast<double>(budget) * static_cast<double>(p.demand_cap);
  p.levels = detail::ceil_log(scale * p.mu * p.alpha / p.c_min, p.beta);
  if (cfg.levels_override) p.levels = *cfg.levels_override;
  if (p.levels < 1) throw InvalidArgument("level count must be positive");
  return p;
}

/// Approximation factor guaranteed by a tau-tight scheme: tau * (2 beta/(beta-1) + f - 1).
/// The uncapacitated mode selects single copies only, giving f * tau.
inline double ratio_for_tightness(const Parameters& p, double tau) {
  if (p.unbounded_capacity()) return p.f * tau;
  return tau * (2.0 * p.beta / (p.beta - 1.0) + (p.f - 1));
}

/// Ratio guaranteed by the dynamically maintained scheme.
inline double theoretical_ratio(const Parameters& p) {
  if (p.mode == Mode::DemandStatic) return ratio_for_tightness(p, p.beta + 1.0);
  return ratio_for_tightness(p, p.tightness());
}

/// Ratio guaranteed by a non-improvable (statically solved) scheme.
inline double static_ratio(const Parameters& p) { return ratio_for_tightness(p, p.beta + 1.0); }

}  // namespace capvc
