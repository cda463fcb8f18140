#pragma once

#include <charconv>
#include <cstdlib>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "capvc/types.hpp"

namespace capvc::cli {

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct InstanceSpec {
  InstanceConfig config;
  std::vector<VertexAttrs> vertices;
};

struct StreamOp {
  enum class Kind { InsertEdge, DeleteEdge, InsertHyper, DeleteHyper, Query, Snapshot };
  Kind kind = Kind::Query;
  VertexId u = 0;
  VertexId v = 0;
  std::int64_t demand = 1;
  std::int64_t id = 0;
  std::vector<VertexId> endpoints;
  std::string path;
  std::size_t line = 0;

  bool is_update() const { return kind != Kind::Query && kind != Kind::Snapshot; }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view s) {
  auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

template <class T>
std::optional<T> to_int(std::string_view s) {
  T out{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return out;
}

inline std::optional<double> to_real(std::string_view s) {
  // from_chars for double is missing from older libstdc++; strtod on a copy is fine here.
  std::string tmp(s);
  if (tmp.empty()) return std::nullopt;
  char* end = nullptr;
  double x = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size()) return std::nullopt;
  return x;
}

/// "key=value" with the expected key.
inline std::optional<std::string_view> keyed(std::string_view tok, std::string_view key) {
  if (tok.size() <= key.size() + 1 || tok.substr(0, key.size()) != key || tok[key.size()] != '=') return std::nullopt;
  return tok.substr(key.size() + 1);
}

[[noreturn]] inline void raise_parse(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source, line, what);
}

}  // namespace detail

inline InstanceSpec parse_instance(std::istream& in, const std::string& source = "instance") {
  InstanceSpec spec;
  bool have_budget = false;
  std::string raw;
  std::size_t no = 0;
  auto fail = [&](const std::string& what) { detail::raise_parse(source, no, what); };
  while (std::getline(in, raw)) {
    ++no;
    auto tok = detail::split_ws(detail::strip_comment(raw));
    if (tok.empty()) continue;
    const auto head = tok[0];
    if (head == "param") {
      if (tok.size() != 3) fail("expected: param <name> <value>");
      if (tok[1] == "d_cap") {
        auto d = detail::to_int<std::int64_t>(tok[2]);
        if (!d || *d < 1) fail("d_cap must be a positive integer");
        spec.config.demand_cap = *d;
        continue;
      }
      auto x = detail::to_real(tok[2]);
      if (!x) fail("bad number '" + std::string(tok[2]) + "'");
      if (tok[1] == "beta") spec.config.beta = *x;
      else if (tok[1] == "epsilon") spec.config.epsilon = *x;
      else if (tok[1] == "c_min") spec.config.c_min = *x;
      else if (tok[1] == "c_max") spec.config.c_max = *x;
      else fail("unknown parameter '" + std::string(tok[1]) + "'");
    } else if (head == "mode") {
      if (tok.size() < 2 || tok.size() > 3) fail("expected: mode <name> [f=<int>]");
      auto m = parse_mode(tok[1]);
      if (!m) fail("unknown mode '" + std::string(tok[1]) + "'");
      spec.config.mode = *m;
      if (tok.size() == 3) {
        auto fv = detail::keyed(tok[2], "f");
        auto f = fv ? detail::to_int<int>(*fv) : std::nullopt;
        if (!f || *f < 2) fail("f must be an integer >= 2");
        if (*m != Mode::SetCover) fail("f only applies to SetCover");
        spec.config.f = *f;
      }
    } else if (head == "budget") {
      auto b = tok.size() == 2 ? detail::to_int<std::int64_t>(tok[1]) : std::nullopt;
      if (!b || *b < 1) fail("expected: budget <positive int>");
      spec.config.size_budget = *b;
      have_budget = true;
    } else if (head == "vertex") {
      if (tok.size() != 4) fail("expected: vertex <id> cost=<float> cap=<int>");
      VertexAttrs a;
      auto id = detail::to_int<VertexId>(tok[1]);
      if (!id || *id < 0) fail("bad vertex id");
      a.id = *id;
      auto cs = detail::keyed(tok[2], "cost");
      auto cost = cs ? detail::to_real(*cs) : std::nullopt;
      if (!cost || !(*cost > 0.0)) fail("cost must be a positive number");
      a.cost = *cost;
      auto ks = detail::keyed(tok[3], "cap");
      auto cap = ks ? detail::to_int<std::int64_t>(*ks) : std::nullopt;
      if (!cap || *cap < 1) fail("cap must be a positive integer");
      a.capacity = *cap;
      spec.vertices.push_back(a);
    } else {
      fail("unknown directive '" + std::string(head) + "'");
    }
  }
  if (spec.vertices.empty()) throw ParseError(source, no, "instance declares no vertices");
  if (!have_budget) {
    if (spec.config.mode == Mode::SetCover) throw ParseError(source, no, "SetCover instances need a budget line");
    spec.config.size_budget = static_cast<std::int64_t>(spec.vertices.size());
  }
  return spec;
}

inline std::vector<StreamOp> parse_stream(std::istream& in, const std::string& source = "stream") {
  std::vector<StreamOp> ops;
  std::string raw;
  std::size_t no = 0;
  auto fail = [&](const std::string& what) { detail::raise_parse(source, no, what); };
  auto vertex = [&](std::string_view s) {
    auto v = detail::to_int<VertexId>(s);
    if (!v || *v < 0) fail("bad vertex id '" + std::string(s) + "'");
    return *v;
  };
  while (std::getline(in, raw)) {
    ++no;
    auto tok = detail::split_ws(detail::strip_comment(raw));
    if (tok.empty()) continue;
    StreamOp op;
    op.line = no;
    const auto head = tok[0];
    if (head == "+" || head == "-") {
      const bool add = head == "+";
      if (tok.size() < 3 || tok.size() > (add ? 4u : 3u)) fail(add ? "expected: + <u> <v> [d=<int>]" : "expected: - <u> <v>");
      op.kind = add ? StreamOp::Kind::InsertEdge : StreamOp::Kind::DeleteEdge;
      op.u = vertex(tok[1]);
      op.v = vertex(tok[2]);
      if (tok.size() == 4) {
        auto dv = detail::keyed(tok[3], "d");
        auto d = dv ? detail::to_int<std::int64_t>(*dv) : std::nullopt;
        if (!d || *d < 1) fail("demand must be a positive integer");
        op.demand = *d;
      }
    } else if (head == "+e") {
      if (tok.size() < 3) fail("expected: +e <id> <v1> ... <vk>");
      auto id = detail::to_int<std::int64_t>(tok[1]);
      if (!id || *id < 0) fail("bad hyperedge id");
      op.kind = StreamOp::Kind::InsertHyper;
      op.id = *id;
      for (std::size_t i = 2; i < tok.size(); ++i) op.endpoints.push_back(vertex(tok[i]));
    } else if (head == "-e") {
      auto id = tok.size() == 2 ? detail::to_int<std::int64_t>(tok[1]) : std::nullopt;
      if (!id || *id < 0) fail("expected: -e <id>");
      op.kind = StreamOp::Kind::DeleteHyper;
      op.id = *id;
    } else if (head == "query") {
      if (tok.size() != 1) fail("query takes no arguments");
      op.kind = StreamOp::Kind::Query;
    } else if (head == "snapshot") {
      if (tok.size() != 2) fail("expected: snapshot <path>");
      op.kind = StreamOp::Kind::Snapshot;
      op.path = std::string(tok[1]);
    } else {
      fail("unknown operation '" + std::string(head) + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

inline InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_instance(in, path);
}

inline std::vector<StreamOp> load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_stream(in, path);
}

inline std::string format_op(const StreamOp& op) {
  std::ostringstream os;
  switch (op.kind) {
    case StreamOp::Kind::InsertEdge:
      os << "+ " << op.u << ' ' << op.v;
      if (op.demand != 1) os << " d=" << op.demand;
      break;
    case StreamOp::Kind::DeleteEdge: os << "- " << op.u << ' ' << op.v; break;
    case StreamOp::Kind::InsertHyper:
      os << "+e " << op.id;
      for (auto v : op.endpoints) os << ' ' << v;
      break;
    case StreamOp::Kind::DeleteHyper: os << "-e " << op.id; break;
    case StreamOp::Kind::Query: os << "query"; break;
    case StreamOp::Kind::Snapshot: os << "snapshot " << op.path; break;
  }
  return os.str();
}

}  // namespace capvc::cli
