#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sliceprio/graph.hpp"

using namespace sliceprio;
using oracles::GraphBuilder;

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

bool has_code(const std::vector<Diagnostic>& ds, std::string_view code) {
  return std::any_of(ds.begin(), ds.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("validate accepts an empty graph") {
  CHECK(validate(DependenceGraph{}).empty());
}

TEST_CASE("validate flags a dangling edge endpoint") {
  GraphBuilder b;
  b.node("a").edge("a", "b", EdgeKind::DataDep);
  auto ds = validate(b.build());
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == "dangling-endpoint");
  CHECK(ds[0].message.find("a -> b") != std::string::npos);
}

TEST_CASE("validate flags a containment cycle") {
  std::vector<Node> nodes = {{"a", NodeKind::Statement, "", "b"},
                             {"b", NodeKind::Statement, "", "a"}};
  std::vector<Edge> edges = {{"b", "a", EdgeKind::Containment},
                             {"a", "b", EdgeKind::Containment}};
  auto ds = validate(DependenceGraph(nodes, edges));
  CHECK(has_code(ds, "containment-cycle"));
}

TEST_CASE("validate flags duplicates, bad parents, and mismatches") {
  SUBCASE("duplicate node id") {
    std::vector<Node> nodes = {{"a", NodeKind::Statement, "", {}},
                               {"a", NodeKind::Statement, "", {}}};
    CHECK(has_code(validate(DependenceGraph(nodes, {})), "duplicate-node-id"));
  }
  SUBCASE("duplicate edge triple") {
    GraphBuilder b;
    b.node("a").node("b").edge("a", "b").edge("a", "b");
    CHECK(has_code(validate(b.build()), "duplicate-edge"));
    GraphBuilder c;  // same pair, different kinds: a legal multigraph
    c.node("a").node("b").edge("a", "b", EdgeKind::DataDep).edge("a", "b", EdgeKind::Call);
    CHECK(validate(c.build()).empty());
  }
  SUBCASE("parent names a missing node") {
    std::vector<Node> nodes = {{"a", NodeKind::Statement, "", "ghost"}};
    CHECK(has_code(validate(DependenceGraph(nodes, {})), "missing-parent"));
  }
  SUBCASE("parent field without containment edge and vice versa") {
    std::vector<Node> nodes = {{"p", NodeKind::Package, "", {}},
                               {"a", NodeKind::Statement, "", "p"}};
    CHECK(has_code(validate(DependenceGraph(nodes, {})), "parent-edge-mismatch"));
    std::vector<Node> nodes2 = {{"p", NodeKind::Package, "", {}},
                                {"a", NodeKind::Statement, "", {}}};
    std::vector<Edge> edges2 = {{"p", "a", EdgeKind::Containment}};
    CHECK(has_code(validate(DependenceGraph(nodes2, edges2)), "parent-edge-mismatch"));
  }
  SUBCASE("parameter nodes must live under methods or statements") {
    GraphBuilder b;
    b.node("p", NodeKind::Package)
        .node("s", NodeKind::Statement, "p")
        .node("f", NodeKind::FormalIn, "s");
    CHECK(has_code(validate(b.build()), "parameter-containment"));
    GraphBuilder c;
    c.node("p", NodeKind::Package)
        .node("k", NodeKind::Class, "p")
        .node("m", NodeKind::Method, "k")
        .node("a", NodeKind::ActualOut, "m");
    CHECK(has_code(validate(c.build()), "parameter-containment"));
  }
  SUBCASE("containment roots must be packages") {
    GraphBuilder b;
    b.node("k", NodeKind::Class).node("m", NodeKind::Method, "k");
    CHECK(has_code(validate(b.build()), "containment-root-kind"));
  }
}

TEST_CASE("reachable walks a chain and honors kind exclusions") {
  GraphBuilder b;
  b.node("a").node("b").node("c").edge("a", "b").edge("b", "c");
  DependenceGraph g = b.build();

  auto r = reachable(g, "a", Direction::Forward);
  CHECK(as_set(r.nodes) == std::set<std::string>{"a", "b", "c"});
  CHECK(r.traversed.size() == 2);

  EdgeFilter filter;
  filter.excluded.insert(EdgeKind::DataDep);
  auto r2 = reachable(g, "a", Direction::Forward, filter);
  CHECK(as_set(r2.nodes) == std::set<std::string>{"a"});
  CHECK(r2.traversed.empty());
}

TEST_CASE("reachable on a diamond, backward") {
  GraphBuilder b;
  b.node("a").node("b").node("c").node("d");
  b.edge("a", "b").edge("a", "c").edge("b", "d").edge("c", "d");
  DependenceGraph g = b.build();
  auto r = reachable(g, "d", Direction::Backward);
  CHECK(as_set(r.nodes) == std::set<std::string>{"a", "b", "c", "d"});
  CHECK(r.traversed.size() == 4);
}

TEST_CASE("reachable reports edges into already-visited nodes as traversed") {
  GraphBuilder b;
  b.node("a").node("b").node("c");
  b.edge("a", "b").edge("a", "c").edge("b", "c");
  auto r = reachable(b.build(), "a", Direction::Forward);
  CHECK(r.traversed.size() == 3);
}

TEST_CASE("reachable honors explicit edge-triple exclusions") {
  GraphBuilder b;
  b.node("a").node("b").node("c").edge("a", "b").edge("b", "c");
  DependenceGraph g = b.build();
  EdgeFilter filter;
  filter.excluded_edges.push_back({"b", "c", EdgeKind::DataDep});
  auto r = reachable(g, "a", Direction::Forward, filter);
  CHECK(as_set(r.nodes) == std::set<std::string>{"a", "b"});
}

TEST_CASE("reachable rejects an unknown start node") {
  GraphBuilder b;
  b.node("a");
  CHECK_THROWS_AS(reachable(b.build(), "nope", Direction::Forward), DataError);
}

TEST_CASE("reachability equals the brute-force closure on random graphs") {
  std::mt19937 rng(20101);
  for (int round = 0; round < 300; ++round) {
    DependenceGraph g = oracles::random_graph(rng);
    oracles::Closure fwd(g);
    oracles::Closure bwd(g, {}, true);
    std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
    std::size_t s = pick(rng);
    const std::string& id = g.node_at(s).id;
    CHECK(as_set(reachable(g, id, Direction::Forward).nodes) == as_set(fwd.row_ids(g, s)));
    CHECK(as_set(reachable(g, id, Direction::Backward).nodes) == as_set(bwd.row_ids(g, s)));
  }
}

TEST_CASE("enlarging the excluded kind set never enlarges the reach") {
  std::mt19937 rng(20102);
  for (int round = 0; round < 200; ++round) {
    DependenceGraph g = oracles::random_graph(rng);
    std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
    const std::string id = g.node_at(pick(rng)).id;

    EdgeFilter small, large;
    std::uniform_int_distribution<int> kind(0, kEdgeKindCount - 1);
    for (int i = 0; i < 3; ++i) {
      EdgeKind k = static_cast<EdgeKind>(kind(rng));
      large.excluded.insert(k);
      if (i < 1) small.excluded.insert(k);
    }
    auto with_small = as_set(reachable(g, id, Direction::Forward, small).nodes);
    auto with_large = as_set(reachable(g, id, Direction::Forward, large).nodes);
    CHECK(std::includes(with_small.begin(), with_small.end(), with_large.begin(),
                        with_large.end()));
    CHECK(with_large.count(id) == 1);  // the start is always a member
  }
}

TEST_CASE("induced subgraph basics") {
  GraphBuilder b;
  b.node("a").node("b").node("c");
  b.edge("a", "b").edge("b", "c").edge("c", "a");
  DependenceGraph g = b.build();

  SUBCASE("keeping every node reproduces the graph") {
    std::vector<std::string> keep = {"a", "b", "c"};
    DependenceGraph sub = induced_subgraph(g, keep);
    CHECK(sub.node_count() == 3);
    CHECK(sub.edges().size() == 3);
  }
  SUBCASE("keeping nothing gives an empty graph") {
    DependenceGraph sub = induced_subgraph(g, {});
    CHECK(sub.node_count() == 0);
    CHECK(sub.edges().empty());
  }
  SUBCASE("triangle restricted to two nodes keeps one edge") {
    std::vector<std::string> keep = {"a", "b"};
    DependenceGraph sub = induced_subgraph(g, keep);
    CHECK(sub.node_count() == 2);
    REQUIRE(sub.edges().size() == 1);
    CHECK(sub.edges()[0] == Edge{"a", "b", EdgeKind::DataDep});
  }
  SUBCASE("unknown keep id is an error") {
    std::vector<std::string> keep = {"a", "zzz"};
    CHECK_THROWS_AS(induced_subgraph(g, keep), DataError);
  }
}

TEST_CASE("induced subgraph drops parents that were not kept") {
  GraphBuilder b;
  b.node("p", NodeKind::Package).node("k", NodeKind::Class, "p");
  DependenceGraph g = b.build();
  std::vector<std::string> keep = {"k"};
  DependenceGraph sub = induced_subgraph(g, keep);
  REQUIRE(sub.node_count() == 1);
  CHECK(!sub.nodes()[0].parent.has_value());
  CHECK(sub.edges().empty());
}

TEST_CASE("induced subgraph is idempotent on random graphs") {
  std::mt19937 rng(20103);
  for (int round = 0; round < 100; ++round) {
    DependenceGraph g = oracles::random_graph(rng);
    std::vector<std::string> keep;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (const Node& n : g.nodes())
      if (coin(rng) < 0.5) keep.push_back(n.id);
    DependenceGraph once = induced_subgraph(g, keep);
    DependenceGraph twice = induced_subgraph(once, keep);
    CHECK(once.node_count() == twice.node_count());
    CHECK(once.edges() == twice.edges());
  }
}
