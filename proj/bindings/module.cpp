#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sliceprio/acc.hpp"
#include "sliceprio/io.hpp"
#include "sliceprio/pipeline.hpp"
#include "sliceprio/prioritizer.hpp"
#include "sliceprio/slicer.hpp"
#include "sliceprio/weights.hpp"

namespace py = pybind11;
using namespace sliceprio;

namespace {

NodeKind node_kind_arg(const std::string& name) {
  auto kind = node_kind_from_string(name);
  if (!kind) throw ParseError("unknown node kind '" + name + "'");
  return *kind;
}

EdgeKind edge_kind_arg(const std::string& name) {
  auto kind = edge_kind_from_string(name);
  if (!kind) throw ParseError("unknown edge kind '" + name + "'");
  return *kind;
}

WeightMode weight_mode_arg(const std::string& name) {
  if (name == "kmeans") return WeightMode::KMeans;
  if (name == "threshold") return WeightMode::Threshold;
  throw ParseError("weights mode must be 'kmeans' or 'threshold'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dependence-graph slicing, affected-component coupling, and "
            "regression test prioritization";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ComputeError>(m, "ComputeError", PyExc_ValueError);

  py::class_<Node>(m, "Node")
      .def(py::init([](const std::string& id, const std::string& kind,
                       const std::string& label, std::optional<std::string> parent) {
             return Node{id, node_kind_arg(kind), label, std::move(parent)};
           }),
           py::arg("id"), py::arg("kind") = "statement", py::arg("label") = "",
           py::arg("parent") = std::nullopt)
      .def_readonly("id", &Node::id)
      .def_property_readonly("kind",
                             [](const Node& n) { return std::string(to_string(n.kind)); })
      .def_readonly("label", &Node::label)
      .def_readonly("parent", &Node::parent);

  py::class_<Edge>(m, "Edge")
      .def(py::init([](const std::string& src, const std::string& dst,
                       const std::string& kind) {
             return Edge{src, dst, edge_kind_arg(kind)};
           }),
           py::arg("src"), py::arg("dst"), py::arg("kind") = "data_dep")
      .def_readonly("src", &Edge::src)
      .def_readonly("dst", &Edge::dst)
      .def_property_readonly("kind",
                             [](const Edge& e) { return std::string(to_string(e.kind)); });

  py::class_<DependenceGraph>(m, "DependenceGraph")
      .def(py::init<std::vector<Node>, std::vector<Edge>>(), py::arg("nodes"),
           py::arg("edges"))
      .def_static("from_json",
                  [](const std::string& text) { return parse_graph_json(text); })
      .def("to_json", [](const DependenceGraph& g) { return serialize_graph_json(g); })
      .def_property_readonly("nodes", &DependenceGraph::nodes)
      .def_property_readonly("edges", &DependenceGraph::edges)
      .def("node_count", &DependenceGraph::node_count)
      .def("has_node", [](const DependenceGraph& g, const std::string& id) {
        return g.has_node(id);
      });

  m.def("load_graph",
        [](const std::string& path) { return parse_graph_json(read_file(path)); },
        py::arg("path"));

  m.def("validate", [](const DependenceGraph& g) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Diagnostic& d : validate(g)) out.emplace_back(d.code, d.message);
    return out;
  });

  m.def(
      "reachable",
      [](const DependenceGraph& g, const std::string& start, const std::string& direction,
         const std::vector<std::string>& excluded_kinds) {
        EdgeFilter filter;
        for (const std::string& k : excluded_kinds) filter.excluded.insert(edge_kind_arg(k));
        Direction dir = direction == "backward" ? Direction::Backward : Direction::Forward;
        ReachResult r = reachable(g, start, dir, filter);
        return py::make_tuple(r.nodes, r.traversed);
      },
      py::arg("graph"), py::arg("start"), py::arg("direction") = "forward",
      py::arg("excluded_kinds") = std::vector<std::string>{});

  m.def("induced_subgraph",
        [](const DependenceGraph& g, const std::vector<std::string>& keep) {
          return induced_subgraph(g, keep);
        });

  py::class_<HdSlice>(m, "HdSlice")
      .def_readonly("q1", &HdSlice::q1)
      .def_readonly("q2", &HdSlice::q2)
      .def_readonly("q3", &HdSlice::q3)
      .def_readonly("q", &HdSlice::q)
      .def_readonly("affected_packages", &HdSlice::affected_packages)
      .def_readonly("affected_classes", &HdSlice::affected_classes)
      .def_readonly("affected_methods", &HdSlice::affected_methods)
      .def_readonly("affected_statements", &HdSlice::affected_statements);

  m.def(
      "hd_slice",
      [](const DependenceGraph& g, const std::string& criterion,
         bool traverse_containment) {
        SliceOptions opts;
        opts.traverse_containment = traverse_containment;
        return hd_slice(g, SlicingCriterion{criterion}, opts);
      },
      py::arg("graph"), py::arg("criterion"), py::arg("traverse_containment") = true);

  m.def("build_asg", &build_asg, py::arg("graph"), py::arg("slice"));

  m.def("inflow", [](const DependenceGraph& g, const std::string& id) {
    return inflow(g, id);
  });
  m.def("outflow", [](const DependenceGraph& g, const std::string& id) {
    return outflow(g, id);
  });
  m.def("acc_raw", [](const DependenceGraph& g, const std::string& id) {
    return acc_raw(g, id);
  });

  py::class_<NodeAcc>(m, "NodeAcc")
      .def_readonly("id", &NodeAcc::id)
      .def_readonly("inflow_size", &NodeAcc::inflow_size)
      .def_readonly("outflow_size", &NodeAcc::outflow_size)
      .def_readonly("psi_size", &NodeAcc::psi_size)
      .def_readonly("acc_raw", &NodeAcc::acc_raw)
      .def_readonly("acc_updated", &NodeAcc::acc_updated);

  py::class_<AccReport>(m, "AccReport")
      .def_readonly("nodes", &AccReport::nodes)
      .def_readonly("slice_acc", &AccReport::slice_acc);

  m.def("acc_report", [](const DependenceGraph& asg) {
    AccReport report = rollup(asg, compute_raw_acc(asg));
    report.slice_acc = slice_acc(report);
    return report;
  });

  py::class_<NodeWeight>(m, "NodeWeight")
      .def_readonly("id", &NodeWeight::id)
      .def_readonly("acc", &NodeWeight::acc)
      .def_readonly("weight", &NodeWeight::weight)
      .def_property_readonly("band", [](const NodeWeight& w) {
        return std::string(to_string(w.band));
      });

  py::class_<WeightMap>(m, "WeightMap")
      .def_readonly("nodes", &WeightMap::nodes)
      .def_property_readonly("mode",
                             [](const WeightMap& w) { return std::string(to_string(w.mode)); })
      .def_readonly("moderate_lower", &WeightMap::moderate_lower)
      .def_readonly("critical_lower", &WeightMap::critical_lower)
      .def("weight_of", [](const WeightMap& w, const std::string& id) {
        const NodeWeight* n = w.find(id);
        if (!n) throw DataError("no weight for node '" + id + "'");
        return n->weight;
      });

  m.def("assign_weights_threshold", &assign_weights_threshold, py::arg("acc"));
  m.def("assign_weights_kmeans", &assign_weights_kmeans, py::arg("acc"),
        py::arg("seed") = 0u);
  m.def(
      "kmeans_1d",
      [](const std::vector<double>& values, int k, unsigned seed) {
        KMeans1D km = kmeans_1d(values, k, seed);
        return py::make_tuple(km.centroids, km.assignment);
      },
      py::arg("values"), py::arg("k"), py::arg("seed") = 0u);

  py::class_<TestCase>(m, "TestCase")
      .def(py::init<std::string, std::vector<std::string>>(), py::arg("id"),
           py::arg("covered"))
      .def_readonly("id", &TestCase::id)
      .def_readonly("covered", &TestCase::covered);

  py::class_<TestWeights>(m, "TestWeights")
      .def_readonly("wtc", &TestWeights::wtc)
      .def_readonly("wtm", &TestWeights::wtm)
      .def_readonly("wtw", &TestWeights::wtw)
      .def_readonly("wt", &TestWeights::wt);

  py::class_<RankedTest>(m, "RankedTest")
      .def_readonly("id", &RankedTest::id)
      .def_readonly("weights", &RankedTest::weights)
      .def_readonly("rank", &RankedTest::rank);

  py::class_<PrioritizedSuite>(m, "PrioritizedSuite")
      .def_readonly("tests", &PrioritizedSuite::tests)
      .def_readonly("tie_groups", &PrioritizedSuite::tie_groups)
      .def("order", [](const PrioritizedSuite& s) {
        std::vector<std::string> out;
        for (const RankedTest& t : s.tests) out.push_back(t.id);
        return out;
      });

  py::class_<FaultMatrix>(m, "FaultMatrix")
      .def(py::init([](std::vector<std::string> tests, std::vector<std::string> faults,
                       std::vector<std::vector<std::uint8_t>> detects) {
             FaultMatrix f;
             f.tests = std::move(tests);
             f.faults = std::move(faults);
             f.detects = std::move(detects);
             return f;
           }),
           py::arg("tests"), py::arg("faults"), py::arg("detects"))
      .def_readonly("tests", &FaultMatrix::tests)
      .def_readonly("faults", &FaultMatrix::faults)
      .def_readonly("detects", &FaultMatrix::detects);

  m.def("test_weights", [](const TestCase& t, const WeightMap& w) {
    return test_weights(t, w);
  });
  m.def(
      "prioritize",
      [](const std::vector<TestCase>& suite, const WeightMap& weights) {
        return prioritize(suite, weights);
      },
      py::arg("suite"), py::arg("weights"));
  m.def(
      "anc_prioritize",
      [](const std::vector<TestCase>& suite, const std::vector<std::string>& affected,
         const std::string& decay) {
        AncDecay d = decay == "subtract" ? AncDecay::Subtract : AncDecay::Halve;
        AncResult r = anc_prioritize(suite, affected, d);
        std::vector<std::pair<std::string, double>> out;
        for (const AncPick& p : r.picks) out.emplace_back(p.id, p.score);
        return out;
      },
      py::arg("suite"), py::arg("affected"), py::arg("decay") = "halve");
  m.def(
      "apfd",
      [](const std::vector<std::string>& ordering, const FaultMatrix& faults,
         bool permissive) { return apfd(ordering, faults, permissive); },
      py::arg("ordering"), py::arg("faults"), py::arg("permissive") = false);
  m.def(
      "percent_detected_curve",
      [](const std::vector<std::string>& ordering, const FaultMatrix& faults,
         bool permissive) { return percent_detected_curve(ordering, faults, permissive); },
      py::arg("ordering"), py::arg("faults"), py::arg("permissive") = false);

  m.def("parse_coverage", &parse_coverage, py::arg("text"));
  m.def("parse_faults", &parse_faults, py::arg("text"));
  m.def("parse_weight_injection", &parse_weight_injection, py::arg("text"));

  m.def(
      "run_pipeline_json",
      [](const DependenceGraph& graph, const std::string& criterion,
         const std::vector<TestCase>& coverage, const std::string& weights_mode,
         unsigned seed, bool permissive, bool exclude_containment,
         std::optional<std::map<std::string, int>> injected_weights,
         const FaultMatrix* faults) {
        PipelineOptions opts;
        opts.weights_mode = weight_mode_arg(weights_mode);
        opts.seed = seed;
        opts.permissive = permissive;
        opts.exclude_containment = exclude_containment;
        opts.injected_weights = std::move(injected_weights);
        return report_json(run_pipeline(graph, criterion, coverage, opts, faults));
      },
      py::arg("graph"), py::arg("criterion"), py::arg("coverage"),
      py::arg("weights_mode") = "kmeans", py::arg("seed") = 0u,
      py::arg("permissive") = false, py::arg("exclude_containment") = false,
      py::arg("injected_weights") = std::nullopt, py::arg("faults") = nullptr);
}
