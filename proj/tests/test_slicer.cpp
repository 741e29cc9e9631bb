#include <doctest.h>

#include <random>
#include <set>

#include "fixture_acc_table.hpp"
#include "oracles.hpp"
#include "sliceprio/io.hpp"
#include "sliceprio/slicer.hpp"

using namespace sliceprio;
using oracles::GraphBuilder;

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

DependenceGraph triangle_fixture() {
  return parse_graph_json(read_file(std::string(SLICEPRIO_FIXTURE_DIR) +
                                    "/triangle_shape_asg.json"));
}

}  // namespace

TEST_CASE("forward marking stops at method-overridden edges") {
  GraphBuilder b;
  b.node("a").node("b").node("c");
  b.edge("a", "b", EdgeKind::DataDep).edge("b", "c", EdgeKind::MethodOverridden);
  CHECK(as_set(forward_mark(b.build(), {"a"})) == std::set<std::string>{"a", "b"});
}

TEST_CASE("forward marking of an isolated node is itself") {
  GraphBuilder b;
  b.node("a");
  CHECK(as_set(forward_mark(b.build(), {"a"})) == std::set<std::string>{"a"});
}

TEST_CASE("forward marking of a chain starts mid-chain") {
  GraphBuilder b;
  for (int i = 1; i <= 5; ++i) b.node(std::to_string(i));
  for (int i = 1; i < 5; ++i) b.edge(std::to_string(i), std::to_string(i + 1));
  CHECK(as_set(forward_mark(b.build(), {"3"})) == std::set<std::string>{"3", "4", "5"});
}

TEST_CASE("criterion must exist and be a sliceable node kind") {
  GraphBuilder b;
  b.node("p", NodeKind::Package).node("m", NodeKind::Method);
  DependenceGraph g = b.build();
  CHECK_THROWS_AS(forward_mark(g, {"zzz"}), DataError);
  CHECK_THROWS_AS(forward_mark(g, {"m"}), DataError);
  CHECK_THROWS_AS(hd_slice(g, {"p"}), DataError);
}

TEST_CASE("backward pass 1 skips its restricted kinds") {
  SUBCASE("a parameter-out edge is not walked") {
    GraphBuilder b;
    b.node("a").node("b").edge("a", "b", EdgeKind::ParameterOut);
    auto [q2, e1] = backward_pass1(b.build(), std::vector<std::string>{"b"});
    CHECK(as_set(q2) == std::set<std::string>{"b"});
    CHECK(e1.empty());
  }
  SUBCASE("a control chain is walked fully") {
    GraphBuilder b;
    b.node("a").node("b").node("c");
    b.edge("a", "b", EdgeKind::ControlDep).edge("b", "c", EdgeKind::ControlDep);
    auto [q2, e1] = backward_pass1(b.build(), std::vector<std::string>{"c"});
    CHECK(as_set(q2) == std::set<std::string>{"a", "b", "c"});
    CHECK(e1.size() == 2);
  }
  SUBCASE("multiple seeds merge, dropping only the excluded edge") {
    GraphBuilder b;
    b.node("a").node("b").node("c").node("d");
    b.edge("a", "b", EdgeKind::DataDep)
        .edge("c", "d", EdgeKind::Call)
        .edge("c", "b", EdgeKind::PolymorphicCall);
    auto [q2, e1] = backward_pass1(b.build(), std::vector<std::string>{"b", "d"});
    CHECK(as_set(q2) == std::set<std::string>{"a", "b", "c", "d"});
    std::set<std::string> traversed_srcs;
    for (const Edge& e : e1) traversed_srcs.insert(e.src + ">" + e.dst);
    CHECK(traversed_srcs == std::set<std::string>{"a>b", "c>d"});
  }
}

TEST_CASE("backward pass 2 skips pass-1 edges and in-kinds but walks out-kinds") {
  SUBCASE("the sole edge was already traversed in pass 1") {
    GraphBuilder b;
    b.node("a").node("b").edge("a", "b", EdgeKind::DataDep);
    DependenceGraph g = b.build();
    std::vector<Edge> e1 = {{"a", "b", EdgeKind::DataDep}};
    CHECK(as_set(backward_pass2(g, std::vector<std::string>{"b"}, e1)) ==
          std::set<std::string>{"b"});
  }
  SUBCASE("parameter-in edges are excluded by kind") {
    GraphBuilder b;
    b.node("a").node("b").edge("a", "b", EdgeKind::ParameterIn);
    CHECK(as_set(backward_pass2(b.build(), std::vector<std::string>{"b"}, {})) ==
          std::set<std::string>{"b"});
  }
  SUBCASE("pass 2 walks the edges pass 1 refused") {
    GraphBuilder b;
    b.node("a").node("b").node("c");
    b.edge("a", "c", EdgeKind::ParameterOut).edge("b", "c", EdgeKind::GenericOut);
    CHECK(as_set(backward_pass2(b.build(), std::vector<std::string>{"c"}, {})) ==
          std::set<std::string>{"a", "b", "c"});
  }
}

TEST_CASE("hd_slice of a single node") {
  GraphBuilder b;
  b.node("n");
  HdSlice s = hd_slice(b.build(), {"n"});
  CHECK(as_set(s.q1) == std::set<std::string>{"n"});
  CHECK(as_set(s.q2) == std::set<std::string>{"n"});
  CHECK(as_set(s.q3) == std::set<std::string>{"n"});
  CHECK(as_set(s.q) == std::set<std::string>{"n"});
  CHECK(s.affected_statements == std::vector<std::string>{"n"});
  CHECK(s.affected_packages.empty());
  CHECK(s.affected_classes.empty());
  CHECK(s.affected_methods.empty());
}

TEST_CASE("hd_slice selects all 33 nodes of the triangle-shape fixture") {
  DependenceGraph g = triangle_fixture();
  REQUIRE(validate(g).empty());
  HdSlice s = hd_slice(g, {"34"});

  CHECK(s.q.size() == 33);
  CHECK(s.q1.size() == 9);
  CHECK(as_set(s.q1) == std::set<std::string>{"23", "33", "34", "52", "53", "54",
                                              "A3.out", "f3.out", "f6.out"});
  // The constructor formal-outs are reachable only through pass 2.
  CHECK(s.q2.size() == 31);
  CHECK(as_set(s.q2).count("f27_1.out") == 0);
  CHECK(as_set(s.q2).count("f27_2.out") == 0);
  CHECK(s.q3.size() == 33);

  CHECK(s.affected_packages == std::vector<std::string>{"1"});
  CHECK(as_set(s.affected_classes) == std::set<std::string>{"3", "24", "46"});
  CHECK(as_set(s.affected_methods) == std::set<std::string>{"4", "27", "33", "52"});
  CHECK(s.affected_statements.size() == 25);

  DependenceGraph asg = build_asg(g, s);
  CHECK(asg.node_count() == 33);
  CHECK(asg.edges().size() == g.edges().size());
}

TEST_CASE("the whole-program fixture slices down to the same 33 nodes") {
  DependenceGraph g = parse_graph_json(
      read_file(std::string(SLICEPRIO_FIXTURE_DIR) + "/triangle_shape_eoosdg.json"));
  REQUIRE(g.node_count() == 89);
  REQUIRE(validate(g).empty());

  HdSlice s = hd_slice(g, {"34"});
  std::set<std::string> expected;
  for (const auto& row : fixture_table::kRows) expected.insert(std::string(row.id));
  CHECK(as_set(s.q) == expected);

  DependenceGraph asg = build_asg(g, s);
  CHECK(asg.node_count() == 33);
  CHECK(s.affected_packages == std::vector<std::string>{"1"});
  CHECK(as_set(s.affected_classes) == std::set<std::string>{"3", "24", "46"});
  CHECK(as_set(s.affected_methods) == std::set<std::string>{"4", "27", "33", "52"});
}

TEST_CASE("build_asg is the induced subgraph of the slice") {
  GraphBuilder b;
  b.node("a").node("b").node("c");
  b.edge("a", "b").edge("b", "c").edge("c", "a");
  DependenceGraph g = b.build();
  HdSlice s;
  s.q = {"a", "b"};
  DependenceGraph asg = build_asg(g, s);
  CHECK(asg.node_count() == 2);
  REQUIRE(asg.edges().size() == 1);
  CHECK(asg.edges()[0] == Edge{"a", "b", EdgeKind::DataDep});
}

TEST_CASE("slice structure invariants hold on random graphs") {
  std::mt19937 rng(30301);
  for (int round = 0; round < 200; ++round) {
    DependenceGraph g = oracles::random_graph(rng);
    HdSlice s = hd_slice(g, {"s"});

    auto q1 = as_set(s.q1), q2 = as_set(s.q2), q3 = as_set(s.q3), q = as_set(s.q);
    CHECK(q1.count("s") == 1);
    CHECK(std::includes(q2.begin(), q2.end(), q1.begin(), q1.end()));
    CHECK(std::includes(q3.begin(), q3.end(), q2.begin(), q2.end()));
    CHECK(q == q3);
    CHECK(s.affected_packages.size() + s.affected_classes.size() +
              s.affected_methods.size() + s.affected_statements.size() ==
          s.q.size());
  }
}

TEST_CASE("without restricted kinds the slice equals the two-phase closure") {
  std::mt19937 rng(30302);
  oracles::RandomGraphOptions opt;
  opt.special_kinds = false;
  for (int round = 0; round < 200; ++round) {
    DependenceGraph g = oracles::random_graph(rng, opt);
    HdSlice s = hd_slice(g, {"s"});
    CHECK(as_set(s.q) == oracles::two_phase_slice(g, "s"));
  }
}

TEST_CASE("removing an edge never enlarges the slice") {
  std::mt19937 rng(30303);
  for (int round = 0; round < 200; ++round) {
    DependenceGraph g = oracles::random_graph(rng);
    if (g.edges().empty()) continue;
    HdSlice before = hd_slice(g, {"s"});

    std::uniform_int_distribution<std::size_t> pick(0, g.edges().size() - 1);
    std::size_t victim = pick(rng);
    if (g.edges()[victim].kind == EdgeKind::Containment) continue;  // keep parents in sync
    std::vector<Edge> pruned;
    for (std::size_t e = 0; e < g.edges().size(); ++e)
      if (e != victim) pruned.push_back(g.edges()[e]);
    DependenceGraph smaller(g.nodes(), pruned);

    auto q_b = as_set(before.q);
    auto q_a = as_set(hd_slice(smaller, {"s"}).q);
    CHECK(std::includes(q_b.begin(), q_b.end(), q_a.begin(), q_a.end()));
  }
}

TEST_CASE("pass 2 with the traversed-edge ban equals a plain closure from q2") {
  // Every banned edge's tail is itself in q2, so the ban cannot hide nodes.
  std::mt19937 rng(30304);
  for (int round = 0; round < 200; ++round) {
    DependenceGraph g = oracles::random_graph(rng);
    HdSlice s = hd_slice(g, {"s"});

    EdgeKindSet in_kinds{EdgeKind::ParameterIn, EdgeKind::GenericIn};
    oracles::Closure bwd(g, in_kinds, true);
    std::set<std::string> expected(s.q2.begin(), s.q2.end());
    for (const std::string& id : s.q2)
      for (const std::string& r : bwd.row_ids(g, *g.index_of(id))) expected.insert(r);
    CHECK(as_set(s.q3) == expected);
  }
}

TEST_CASE("containment traversal can be switched off") {
  GraphBuilder b;
  b.node("p", NodeKind::Package).node("a", NodeKind::Statement, "p");
  DependenceGraph g = b.build();
  SliceOptions opts;
  opts.traverse_containment = false;
  CHECK(as_set(hd_slice(g, {"a"}, opts).q) == std::set<std::string>{"a"});
  CHECK(as_set(hd_slice(g, {"a"}).q) == std::set<std::string>{"a", "p"});
}
