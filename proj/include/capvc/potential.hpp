#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "capvc/types.hpp"

namespace capvc {

/// phi(e): potential parked on an edge at the given level.
inline double phi(Level edge_level, const Parameters& p) {
  return p.phi_coefficient() * static_cast<double>(p.levels - edge_level);
}

/// psi(v) for a vertex with the given level and weight. Passive vertices carry none.
inline double psi(const Parameters& p, double cost, Level level, double weight, bool active) {
  if (!active) return 0.0;
  const double f = p.mode == Mode::SetCover ? static_cast<double>(p.f) : 1.0;
  // f * alpha * c_v^*: equals c_v / (beta + 1) in the capacitated modes.
  const double threshold = f * p.alpha * p.lower_threshold(cost);
  const double gap = threshold - weight;
  if (gap <= 0.0) return 0.0;
  const double prefactor = std::pow(p.beta, static_cast<double>(level + 1)) / (f * p.mu * (p.beta - 1.0));
  return prefactor * gap;
}

struct PotentialSnapshot {
  double phi_sum = 0.0;
  double psi_sum = 0.0;
  double bank = 0.0;
};

inline PotentialSnapshot make_snapshot(const Parameters& p, double phi_sum, double psi_sum) {
  return {phi_sum, psi_sum, (phi_sum + psi_sum) / p.epsilon};
}

/// Largest bank increase an edge insertion may cause.
inline double insert_deposit_bound(const Parameters& p) {
  return p.phi_coefficient() * p.levels / p.epsilon + p.beta / ((p.beta - 1.0) * p.epsilon);
}

/// Largest bank increase an edge deletion may cause.
inline double delete_deposit_bound(const Parameters& p) { return p.beta / ((p.beta - 1.0) * p.epsilon); }

inline constexpr double kAccountingSlack = 1e-6;

enum class AccountingKind { Insert, Delete, LevelUp, LevelDown };

inline const char* to_string(AccountingKind k) {
  switch (k) {
    case AccountingKind::Insert: return "insert";
    case AccountingKind::Delete: return "delete";
    case AccountingKind::LevelUp: return "level-up";
    case AccountingKind::LevelDown: return "level-down";
  }
  return "?";
}

struct AccountingEvent {
  AccountingKind kind = AccountingKind::Insert;
  double bank_before = 0.0;
  double bank_after = 0.0;
  std::int64_t touched = 0;
};

struct CheckResult {
  bool ok = true;
  /// Positive when the inequality holds with room to spare.
  double margin = 0.0;
};

/// Adjustment steps may deposit at most the fixed bound; level events must pay
/// for every edge they touch out of the bank.
inline CheckResult assert_event_accounting(const Parameters& p, const AccountingEvent& ev) {
  CheckResult r;
  switch (ev.kind) {
    case AccountingKind::Insert:
      r.margin = insert_deposit_bound(p) - (ev.bank_after - ev.bank_before);
      break;
    case AccountingKind::Delete:
      r.margin = delete_deposit_bound(p) - (ev.bank_after - ev.bank_before);
      break;
    case AccountingKind::LevelUp:
    case AccountingKind::LevelDown:
      r.margin = (ev.bank_before - ev.bank_after) - static_cast<double>(ev.touched);
      break;
  }
  r.ok = r.margin >= -kAccountingSlack;
  return r;
}

}  // namespace capvc
