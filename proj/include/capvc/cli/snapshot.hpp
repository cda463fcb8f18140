#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "capvc/cli/parse.hpp"
#include "capvc/graph_state.hpp"

namespace capvc::cli {

inline constexpr std::string_view kSnapshotMagic = "capvc-snapshot";
inline constexpr int kSnapshotVersion = 1;

class SnapshotError : public Error {
 public:
  using Error::Error;
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Exact text form of a double.
inline std::string hexfloat(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

/// Line-oriented reader over a checksummed snapshot body.
class SnapshotReader {
 public:
  explicit SnapshotReader(std::string body) : body_(std::move(body)) {}

  /// Next line split into tokens; the first token must be `head`.
  std::vector<std::string> expect(std::string_view head) {
    auto tok = next();
    if (tok.empty() || tok[0] != head) {
      throw SnapshotError("snapshot: expected '" + std::string(head) + "' on line " + std::to_string(line_));
    }
    return tok;
  }

  /// Remainder of the next line after its first token.
  std::string rest_of_line(std::string_view head) {
    auto raw = raw_line();
    if (raw.substr(0, head.size()) != head || (raw.size() > head.size() && raw[head.size()] != ' ')) {
      throw SnapshotError("snapshot: expected '" + std::string(head) + "' on line " + std::to_string(line_));
    }
    return raw.size() > head.size() ? std::string(raw.substr(head.size() + 1)) : std::string();
  }

  bool done() const { return pos_ >= body_.size(); }
  std::size_t line() const { return line_; }

  static std::int64_t integer(const std::string& s) {
    auto v = detail::to_int<std::int64_t>(s);
    if (!v) throw SnapshotError("snapshot: bad integer '" + s + "'");
    return *v;
  }
  static std::uint64_t unsigned_integer(const std::string& s) {
    auto v = detail::to_int<std::uint64_t>(s);
    if (!v) throw SnapshotError("snapshot: bad integer '" + s + "'");
    return *v;
  }
  static double real(const std::string& s) {
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw SnapshotError("snapshot: bad number '" + s + "'");
    return x;
  }

 private:
  std::string_view raw_line() {
    if (done()) throw SnapshotError("snapshot: unexpected end of data");
    auto nl = body_.find('\n', pos_);
    if (nl == std::string::npos) nl = body_.size();
    std::string_view out(body_.data() + pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_;
    return out;
  }
  std::vector<std::string> next() {
    std::vector<std::string> out;
    for (auto t : detail::split_ws(raw_line())) out.emplace_back(t);
    return out;
  }

  std::string body_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

inline void write_parameters(std::ostream& os, const Parameters& p) {
  os << "params " << to_string(p.mode) << ' ' << hexfloat(p.beta) << ' ' << hexfloat(p.epsilon) << ' '
     << hexfloat(p.mu) << ' ' << hexfloat(p.alpha) << ' ' << p.levels << ' ' << p.f << ' ' << hexfloat(p.c_min)
     << ' ' << hexfloat(p.c_max) << ' ' << p.size_budget << ' ' << p.k_max << ' ' << p.demand_cap << '\n';
}

inline Parameters read_parameters(SnapshotReader& r) {
  auto t = r.expect("params");
  if (t.size() != 13) throw SnapshotError("snapshot: malformed params line");
  Parameters p;
  auto mode = parse_mode(t[1]);
  if (!mode) throw SnapshotError("snapshot: unknown mode " + t[1]);
  p.mode = *mode;
  p.beta = SnapshotReader::real(t[2]);
  p.epsilon = SnapshotReader::real(t[3]);
  p.mu = SnapshotReader::real(t[4]);
  p.alpha = SnapshotReader::real(t[5]);
  p.levels = static_cast<Level>(SnapshotReader::integer(t[6]));
  p.f = static_cast<int>(SnapshotReader::integer(t[7]));
  p.c_min = SnapshotReader::real(t[8]);
  p.c_max = SnapshotReader::real(t[9]);
  p.size_budget = SnapshotReader::integer(t[10]);
  p.k_max = SnapshotReader::integer(t[11]);
  p.demand_cap = SnapshotReader::integer(t[12]);
  if (p.levels < 1 || p.levels > 4096) throw SnapshotError("snapshot: level count out of range");
  return p;
}

inline void write_image(std::ostream& os, const GraphState::Image& img) {
  write_parameters(os, img.params);
  os << "counters " << img.stamp << ' ' << img.wall_ops << ' ' << img.touched_total << ' ' << int(img.tracking) << ' '
     << hexfloat(img.phi_sum) << ' ' << hexfloat(img.psi_sum) << ' ' << int(img.static_scheme) << '\n';
  os << "vertices " << img.vertices.size() << '\n';
  for (const auto& v : img.vertices) {
    os << "v " << v.attrs.id << ' ' << hexfloat(v.attrs.cost) << ' ' << v.attrs.capacity << ' ' << v.level << '\n';
  }
  os << "edges " << img.edges.size() << '\n';
  for (const auto& e : img.edges) {
    os << "e " << e.demand << ' ' << e.payload << ' ' << e.key << ' ' << e.level << ' ' << e.owner << ' '
       << e.endpoints.size();
    for (auto w : e.endpoints) os << ' ' << w;
    os << '\n';
  }
  os << "buckets " << img.buckets.size() << '\n';
  for (const auto& b : img.buckets) {
    os << "b " << b.vertex << ' ' << b.level << ' ' << b.edges.size();
    for (auto i : b.edges) os << ' ' << i;
    os << '\n';
  }
}

inline GraphState::Image read_image(SnapshotReader& r) {
  using R = SnapshotReader;
  GraphState::Image img;
  img.params = read_parameters(r);
  auto c = r.expect("counters");
  if (c.size() != 8) throw SnapshotError("snapshot: malformed counters line");
  img.stamp = R::unsigned_integer(c[1]);
  img.wall_ops = R::unsigned_integer(c[2]);
  img.touched_total = R::unsigned_integer(c[3]);
  img.tracking = R::integer(c[4]) != 0;
  img.phi_sum = R::real(c[5]);
  img.psi_sum = R::real(c[6]);
  img.static_scheme = R::integer(c[7]) != 0;

  auto count = [&](std::string_view head) {
    auto t = r.expect(head);
    if (t.size() != 2) throw SnapshotError("snapshot: malformed " + std::string(head) + " line");
    return static_cast<std::size_t>(R::unsigned_integer(t[1]));
  };
  const auto nv = count("vertices");
  for (std::size_t i = 0; i < nv; ++i) {
    auto t = r.expect("v");
    if (t.size() != 5) throw SnapshotError("snapshot: malformed vertex line");
    GraphState::VertexImage v;
    v.attrs.id = static_cast<VertexId>(R::integer(t[1]));
    v.attrs.cost = R::real(t[2]);
    v.attrs.capacity = R::integer(t[3]);
    v.level = static_cast<Level>(R::integer(t[4]));
    if (v.level < 0 || v.level > img.params.levels) throw SnapshotError("snapshot: vertex level out of range");
    img.vertices.push_back(v);
  }
  const auto ne = count("edges");
  for (std::size_t i = 0; i < ne; ++i) {
    auto t = r.expect("e");
    if (t.size() < 7) throw SnapshotError("snapshot: malformed edge line");
    GraphState::EdgeImage e;
    e.demand = R::integer(t[1]);
    e.payload = R::integer(t[2]);
    e.key = R::unsigned_integer(t[3]);
    e.level = static_cast<Level>(R::integer(t[4]));
    e.owner = static_cast<VertexId>(R::integer(t[5]));
    const auto k = static_cast<std::size_t>(R::unsigned_integer(t[6]));
    if (t.size() != 7 + k) throw SnapshotError("snapshot: edge arity mismatch");
    for (std::size_t s = 0; s < k; ++s) e.endpoints.push_back(static_cast<VertexId>(R::integer(t[7 + s])));
    img.edges.push_back(std::move(e));
  }
  const auto nb = count("buckets");
  for (std::size_t i = 0; i < nb; ++i) {
    auto t = r.expect("b");
    if (t.size() < 4) throw SnapshotError("snapshot: malformed bucket line");
    GraphState::BucketImage b;
    b.vertex = static_cast<VertexId>(R::integer(t[1]));
    b.level = static_cast<Level>(R::integer(t[2]));
    const auto k = static_cast<std::size_t>(R::unsigned_integer(t[3]));
    if (t.size() != 4 + k) throw SnapshotError("snapshot: bucket size mismatch");
    for (std::size_t s = 0; s < k; ++s) b.edges.push_back(static_cast<std::int32_t>(R::integer(t[4 + s])));
    img.buckets.push_back(std::move(b));
  }
  return img;
}

/// Appends the checksum trailer to a snapshot body.
inline std::string seal(const std::string& body) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checksum %016llx\n", static_cast<unsigned long long>(fnv1a(body)));
  return body + buf;
}

/// Verifies header and trailer; returns the body after the header line.
inline std::string unseal(const std::string& text) {
  if (text.empty() || text.back() != '\n') throw SnapshotError("snapshot: truncated file (checksum failure)");
  const auto last = text.rfind('\n', text.size() - 2);
  const std::string body = last == std::string::npos ? std::string() : text.substr(0, last + 1);
  const std::string trailer = text.substr(last == std::string::npos ? 0 : last + 1);
  unsigned long long want = 0;
  if (std::sscanf(trailer.c_str(), "checksum %llx", &want) != 1 || want != fnv1a(body)) {
    throw SnapshotError("snapshot: checksum failure");
  }
  const auto nl = body.find('\n');
  const std::string header = body.substr(0, nl);
  const std::string expected = std::string(kSnapshotMagic) + " " + std::to_string(kSnapshotVersion);
  if (header.substr(0, kSnapshotMagic.size()) != kSnapshotMagic) throw SnapshotError("snapshot: not a snapshot file");
  if (header != expected) throw SnapshotError("snapshot: version mismatch ('" + header + "')");
  return body.substr(nl + 1);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << data;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace capvc::cli
