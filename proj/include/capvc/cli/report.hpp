#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capvc/potential.hpp"

namespace capvc::cli {

struct QueryReport {
  std::uint64_t t = 0;
  double cost = 0.0;
  /// Absent when the mode has no valid lower bound (cluster alternative).
  std::optional<double> dual_lb;
  std::optional<double> empirical_ratio;
  double theoretical_ratio = 0.0;
  std::vector<std::int64_t> levels_histogram;
  std::uint64_t count_ops_cumulative = 0;
  std::uint64_t wall_ops = 0;
  std::int64_t h = 0;
  std::optional<PotentialSnapshot> potential;
  std::optional<std::vector<std::string>> check_failures;
  std::optional<double> oracle_opt;
};

/// Single-line JSON object writer with insertion-ordered keys.
/// Reals use 17 significant digits; non-finite values become null.
class JsonLine {
 public:
  JsonLine& key(std::string_view k) {
    sep();
    quote(k);
    out_ += ':';
    fresh_ = true;
    return *this;
  }
  JsonLine& value(double x) {
    sep();
    if (!std::isfinite(x)) {
      out_ += "null";
    } else {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out_ += buf;
    }
    return *this;
  }
  JsonLine& value(std::int64_t x) {
    sep();
    out_ += std::to_string(x);
    return *this;
  }
  JsonLine& value(std::uint64_t x) {
    sep();
    out_ += std::to_string(x);
    return *this;
  }
  JsonLine& value(bool b) {
    sep();
    out_ += b ? "true" : "false";
    return *this;
  }
  JsonLine& value(std::string_view s) {
    sep();
    quote(s);
    return *this;
  }
  JsonLine& null() {
    sep();
    out_ += "null";
    return *this;
  }
  JsonLine& open(char c) {
    sep();
    out_ += c;
    fresh_ = true;
    return *this;
  }
  JsonLine& close(char c) {
    out_ += c;
    fresh_ = false;
    return *this;
  }
  JsonLine& begin_object() { return open('{'); }
  JsonLine& end_object() { return close('}'); }
  JsonLine& begin_array() { return open('['); }
  JsonLine& end_array() { return close(']'); }

  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (!fresh_ && !out_.empty()) out_ += ',';
    fresh_ = false;
  }
  void quote(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  bool fresh_ = true;
};

inline std::string to_json(const QueryReport& r) {
  JsonLine j;
  j.begin_object();
  j.key("t").value(r.t);
  j.key("cost").value(r.cost);
  j.key("dual_lb");
  r.dual_lb ? j.value(*r.dual_lb) : j.null();
  j.key("empirical_ratio");
  r.empirical_ratio ? j.value(*r.empirical_ratio) : j.null();
  j.key("theoretical_ratio").value(r.theoretical_ratio);
  j.key("levels_histogram").begin_array();
  for (auto c : r.levels_histogram) j.value(c);
  j.end_array();
  j.key("count_ops_cumulative").value(r.count_ops_cumulative);
  j.key("wall_ops").value(r.wall_ops);
  j.key("h").value(r.h);
  if (r.potential) {
    j.key("potential").begin_object();
    j.key("phi_sum").value(r.potential->phi_sum);
    j.key("psi_sum").value(r.potential->psi_sum);
    j.key("bank").value(r.potential->bank);
    j.end_object();
  }
  if (r.check_failures) {
    j.key("check_failures").begin_array();
    for (const auto& f : *r.check_failures) j.value(std::string_view(f));
    j.end_array();
  }
  if (r.oracle_opt) j.key("oracle_opt").value(*r.oracle_opt);
  j.end_object();
  return j.str();
}

}  // namespace capvc::cli
