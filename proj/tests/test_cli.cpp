#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "capvc/cli/generate.hpp"
#include "capvc/cli/parse.hpp"
#include "capvc/cli/run.hpp"
#include "capvc/cli/session.hpp"
#include "support.hpp"

using namespace capvc;
using namespace capvc::cli;

namespace {

const std::vector<std::string> kFixtures{"single_edge", "capacitated",  "star",           "weighted",
                                         "setcover",    "demand_static", "demand_cluster", "demand_split"};

InstanceSpec instance_from(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

std::vector<StreamOp> stream_from(const std::string& text) {
  std::istringstream in(text);
  return parse_stream(in);
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_fixture(const std::string& name, SessionOptions opts) {
  Session s(load_instance(testref::fixture(name + ".inst")), opts);
  std::ostringstream out, err;
  Run r;
  r.code = run_stream(s, load_stream(testref::fixture(name + ".stream")), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

const char* kPair = "param beta 2\nparam epsilon 0.05\nmode Capacitated\nvertex 0 cost=1 cap=1\nvertex 1 cost=1 cap=1\n";

}  // namespace

TEST(Parse, InstanceFile) {
  auto spec = instance_from(
      "# comment\nparam beta 2.43\nparam epsilon 0.01\nmode SetCover f=3\nbudget 12\n"
      "vertex 0 cost=1.5 cap=2\nvertex 3 cost=4 cap=1  # trailing\n");
  EXPECT_EQ(spec.config.mode, Mode::SetCover);
  EXPECT_EQ(spec.config.f, 3);
  EXPECT_EQ(spec.config.beta, 2.43);
  EXPECT_EQ(spec.config.size_budget, 12);
  ASSERT_EQ(spec.vertices.size(), 2u);
  EXPECT_EQ(spec.vertices[1].id, 3);
  EXPECT_EQ(spec.vertices[1].cost, 4.0);
  EXPECT_EQ(spec.vertices[0].capacity, 2);
}

TEST(Parse, InstanceErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line([] { instance_from("param beta 2\nparam beta x\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { instance_from("mode Nope\n"); }), 1u);
  EXPECT_EQ(parse_error_line([] { instance_from("\n\nvertex 0 cost=1\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { instance_from("vertex 0 cost=1 cap=0\n"); }), 1u);
  EXPECT_EQ(parse_error_line([] { instance_from("bogus\n"); }), 1u);
}

TEST(Parse, StreamOps) {
  auto ops = stream_from("+ 0 1\n+ 1 2 d=3\n- 0 1\n+e 4 0 1 2\n-e 4\nquery\nsnapshot /tmp/x\n\n# done\n");
  ASSERT_EQ(ops.size(), 7u);
  EXPECT_EQ(ops[1].demand, 3);
  EXPECT_EQ(ops[3].kind, StreamOp::Kind::InsertHyper);
  EXPECT_EQ(ops[3].endpoints, (std::vector<VertexId>{0, 1, 2}));
  EXPECT_EQ(ops[6].path, "/tmp/x");
  EXPECT_EQ(ops[6].line, 7u);
}

TEST(Parse, StreamErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line([] { stream_from("+ 0 1\n+ 0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { stream_from("+ 0 1 d=0\n"); }), 1u);
  EXPECT_EQ(parse_error_line([] { stream_from("query\n- a b\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { stream_from("\n\n\njump\n"); }), 4u);
  EXPECT_EQ(parse_error_line([] { stream_from("-e\n"); }), 1u);
}

TEST(Parse, FormatRoundTrip) {
  const std::string text = "+ 0 1\n+ 1 2 d=3\n- 0 1\n+e 4 0 1 2\n-e 4\nquery\nsnapshot /tmp/x\n";
  EXPECT_EQ(format_stream(stream_from(text)), text);
  auto spec = generate_instance(6, 3, InstanceConfig{});
  spec.config.beta = 2.43;
  auto again = instance_from(format_instance(spec));
  EXPECT_EQ(format_instance(again), format_instance(spec));
  EXPECT_EQ(again.config.beta, 2.43);
}

TEST(Report, JsonKeyOrderAndDigits) {
  QueryReport r;
  r.t = 3;
  r.cost = 0.1;
  r.dual_lb = 1.0 / 3.0;
  r.empirical_ratio = 0.3;
  r.theoretical_ratio = 39;
  r.levels_histogram = {1, 0, 2};
  r.h = 2;
  const auto line = to_json(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  auto j = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"t", "cost", "dual_lb", "empirical_ratio", "theoretical_ratio",
                                            "levels_histogram", "count_ops_cumulative", "wall_ops", "h"}));
  EXPECT_EQ(j["dual_lb"].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(j["cost"].get<double>(), 0.1);

  r.dual_lb.reset();
  r.empirical_ratio.reset();
  r.potential = PotentialSnapshot{1, 2, 3};
  r.check_failures = std::vector<std::string>{"a \"quoted\" line"};
  j = nlohmann::ordered_json::parse(to_json(r));
  EXPECT_TRUE(j["dual_lb"].is_null());
  EXPECT_EQ(j["potential"]["bank"].get<double>(), 3.0);
  EXPECT_EQ(j["check_failures"][0].get<std::string>(), "a \"quoted\" line");
}

TEST(Run, SingleEdgeReport) {
  Session s(instance_from(kPair), {});
  std::ostringstream out, err;
  EXPECT_EQ(run_stream(s, stream_from("+ 0 1\nquery\n"), out, err), kExitOk);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["t"], 1);
  EXPECT_EQ(j["cost"].get<double>(), 1.0);
  EXPECT_EQ(j["dual_lb"].get<double>(), 1.0);
  EXPECT_EQ(j["h"], 1);
}

TEST(Run, ExitCodes) {
  {
    Session s(instance_from(kPair), {});
    std::ostringstream out, err;
    EXPECT_EQ(run_stream(s, {}, out, err), kExitOk);
    EXPECT_TRUE(out.str().empty());
  }
  {
    Session s(instance_from(kPair), {});
    std::ostringstream out, err;
    EXPECT_EQ(run_stream(s, stream_from("query\n- 0 1\nquery\n"), out, err), kExitRuntime);
    EXPECT_NE(err.str().find("line 2"), std::string::npos);
    const auto text = out.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  }
  {
    Session s(instance_from(kPair), {});
    std::ostringstream out, err;
    EXPECT_EQ(run_stream(s, stream_from("+e 0 0 1\n"), out, err), kExitRuntime);
  }
}

TEST(Run, VerificationFailureExitCode) {
  // The static demand fixture contains a non-improvable scheme that is not tight.
  auto r = run_fixture("demand_static", {Verify::Oracle, true});
  EXPECT_EQ(r.code, kExitVerify);
  EXPECT_NE(r.err.find("check failure"), std::string::npos);
}

TEST(Run, FixturesPassOracleVerification) {
  for (const auto& name : kFixtures) {
    if (name == "demand_static") continue;
    auto r = run_fixture(name, {Verify::Oracle, true});
    EXPECT_EQ(r.code, kExitOk) << name << ": " << r.err;
  }
}

TEST(Run, ReplayIsByteIdentical) {
  for (const auto& name : kFixtures) {
    auto a = run_fixture(name, {Verify::Invariants, true});
    auto b = run_fixture(name, {Verify::Invariants, true});
    EXPECT_FALSE(a.out.empty()) << name;
    EXPECT_EQ(a.out, b.out) << name;
    EXPECT_EQ(a.code, b.code) << name;
  }
}

TEST(Snapshot, RoundTripQueryMatches) {
  Session s(instance_from(kPair), {});
  s.apply(stream_from("+ 0 1\n")[0]);
  auto text = s.snapshot_text();
  auto back = Session::from_snapshot_text(text, {});
  EXPECT_EQ(back.snapshot_text(), text);
  EXPECT_EQ(to_json(back.query()), to_json(s.query()));
}

TEST(Snapshot, ContinuationMatchesUninterruptedRun) {
  for (const auto& name : kFixtures) {
    const auto spec = load_instance(testref::fixture(name + ".inst"));
    const auto ops = load_stream(testref::fixture(name + ".stream"));
    const SessionOptions opts{Verify::Invariants, true};
    Session whole(spec, opts);
    Session first(spec, opts);
    const std::size_t cut = ops.size() / 2;
    std::ostringstream sink, err;
    std::vector<StreamOp> head(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<StreamOp> tail(ops.begin() + static_cast<std::ptrdiff_t>(cut), ops.end());
    run_stream(first, head, sink, err);
    run_stream(whole, head, sink, err);
    auto resumed = Session::from_snapshot_text(first.snapshot_text(), opts);
    std::ostringstream a, b;
    const int ca = run_stream(whole, tail, a, err);
    const int cb = run_stream(resumed, tail, b, err);
    EXPECT_EQ(a.str(), b.str()) << name;
    EXPECT_EQ(ca, cb) << name;
    EXPECT_EQ(whole.snapshot_text(), resumed.snapshot_text()) << name;
  }
}

TEST(Snapshot, HundredMoreUpdates) {
  auto spec = generate_instance(10, 5, InstanceConfig{});
  GenParams gp;
  gp.n = 10;
  gp.T = 300;
  gp.query_every = 7;
  gp.seed = 5;
  const auto ops = generate_stream(gp);
  std::vector<StreamOp> head, tail;
  std::int64_t updates = 0;
  for (const auto& op : ops) {
    (updates < 200 ? head : tail).push_back(op);
    if (op.is_update()) ++updates;
  }
  Session whole(spec, {}), part(spec, {});
  std::ostringstream sink, err, a, b;
  run_stream(whole, head, sink, err);
  run_stream(part, head, sink, err);
  const auto path = (std::filesystem::temp_directory_path() / "capvc_cli_test.snap").string();
  part.save(path);
  auto resumed = Session::load(path, {});
  std::filesystem::remove(path);
  run_stream(whole, tail, a, err);
  run_stream(resumed, tail, b, err);
  EXPECT_FALSE(a.str().empty());
  EXPECT_EQ(a.str(), b.str());
}

TEST(Snapshot, StreamDirectiveWritesLoadableFile) {
  const auto path = (std::filesystem::temp_directory_path() / "capvc_cli_directive.snap").string();
  Session s(instance_from(kPair), {});
  std::ostringstream out, err;
  ASSERT_EQ(run_stream(s, stream_from("+ 0 1\nsnapshot " + path + "\n"), out, err), kExitOk);
  auto back = Session::load(path, {});
  std::filesystem::remove(path);
  EXPECT_EQ(back.t(), 1u);
  EXPECT_EQ(back.query().cost, 1.0);
}

TEST(Snapshot, CorruptionDetected) {
  Session s(instance_from(kPair), {});
  s.apply(stream_from("+ 0 1\n")[0]);
  const auto text = s.snapshot_text();
  EXPECT_THROW(Session::from_snapshot_text(text.substr(0, text.size() / 2), {}), SnapshotError);
  EXPECT_THROW(Session::from_snapshot_text(text.substr(0, text.size() - 1), {}), SnapshotError);
  auto flipped = text;
  flipped[flipped.find("state") + 1] = 'X';
  EXPECT_THROW(Session::from_snapshot_text(flipped, {}), SnapshotError);
  // A newer version with a valid checksum is still refused.
  auto body = text.substr(0, text.rfind("checksum"));
  body.replace(body.find(" 1\n"), 3, " 2\n");
  EXPECT_THROW(
      {
        try {
          Session::from_snapshot_text(seal(body), {});
        } catch (const SnapshotError& e) {
          EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
          throw;
        }
      },
      SnapshotError);
}

TEST(Generate, Deterministic) {
  for (auto fam : {Family::ErdosChurn, Family::SlidingWindow, Family::StarAdversary, Family::HyperChurn}) {
    GenParams gp;
    gp.family = fam;
    gp.n = 9;
    gp.T = 120;
    gp.w = 10;
    gp.seed = 77;
    gp.query_every = 10;
    EXPECT_EQ(format_stream(generate_stream(gp)), format_stream(generate_stream(gp)));
    gp.seed = 78;
    auto other = format_stream(generate_stream(gp));
    gp.seed = 77;
    EXPECT_NE(format_stream(generate_stream(gp)), other);
  }
  EXPECT_EQ(format_instance(generate_instance(8, 4, {})), format_instance(generate_instance(8, 4, {})));
  EXPECT_FALSE(parse_family("nope").has_value());
}

TEST(Generate, ErdosChurnPrefixesStaySimple) {
  GenParams gp;
  gp.n = 8;
  gp.T = 200;
  gp.seed = 1;
  const auto ops = generate_stream(gp);
  EXPECT_EQ(ops.size(), 200u);
  std::set<std::pair<VertexId, VertexId>> live;
  for (const auto& op : ops) {
    ASSERT_NE(op.u, op.v);
    const auto e = std::minmax(op.u, op.v);
    if (op.kind == StreamOp::Kind::InsertEdge) {
      EXPECT_TRUE(live.insert(e).second);
    } else {
      EXPECT_EQ(live.erase(e), 1u);
    }
    EXPECT_LE(live.size(), 28u);
  }
}

TEST(Generate, SlidingWindowDeletesOldest) {
  GenParams gp;
  gp.family = Family::SlidingWindow;
  gp.n = 12;
  gp.T = 400;
  gp.w = 15;
  gp.seed = 3;
  std::vector<std::pair<VertexId, VertexId>> inserted;
  std::size_t deleted = 0;
  for (const auto& op : generate_stream(gp)) {
    if (op.kind == StreamOp::Kind::InsertEdge) {
      inserted.emplace_back(op.u, op.v);
    } else {
      ASSERT_LT(deleted, inserted.size());
      EXPECT_EQ(std::make_pair(op.u, op.v), inserted[deleted]);
      ++deleted;
      EXPECT_EQ(inserted.size() - deleted, static_cast<std::size_t>(gp.w));
    }
  }
  EXPECT_GT(deleted, 0u);
}

TEST(Generate, StarAdversaryUsesHub) {
  GenParams gp;
  gp.family = Family::StarAdversary;
  gp.n = 6;
  gp.T = 50;
  for (const auto& op : generate_stream(gp)) EXPECT_EQ(op.u, 0);
}
