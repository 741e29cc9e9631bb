#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sliceprio/acc.hpp"
#include "sliceprio/io.hpp"
#include "sliceprio/pipeline.hpp"
#include "sliceprio/prioritizer.hpp"
#include "sliceprio/slicer.hpp"
#include "sliceprio/weights.hpp"

namespace {

using namespace sliceprio;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitParseError = 2;
constexpr int kExitComputeError = 3;

std::string fixed6(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

struct CommonFlags {
  std::string weights_mode = "kmeans";
  unsigned seed = 0;
  bool permissive = false;
  bool exclude_containment = false;
  std::string report_path;
  std::string inject_weights_path;
};

PipelineOptions to_options(const CommonFlags& flags) {
  PipelineOptions opts;
  opts.weights_mode =
      flags.weights_mode == "threshold" ? WeightMode::Threshold : WeightMode::KMeans;
  opts.seed = flags.seed;
  opts.permissive = flags.permissive;
  opts.exclude_containment = flags.exclude_containment;
  if (!flags.inject_weights_path.empty())
    opts.injected_weights = parse_weight_injection(read_file(flags.inject_weights_path));
  return opts;
}

DependenceGraph load_graph(const std::string& path) {
  return parse_graph_json(read_file(path));
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void maybe_write_report(const std::string& path, const std::string& content) {
  if (!path.empty()) write_file(path, content);
}

void print_id_set(const char* name, const std::vector<std::string>& ids) {
  std::cout << name << " (" << ids.size() << "):";
  for (const std::string& id : ids) std::cout << ' ' << id;
  std::cout << "\n";
}

int cmd_validate(const std::string& graph_path) {
  DependenceGraph graph = load_graph(graph_path);
  auto diagnostics = validate(graph);
  for (const Diagnostic& d : diagnostics)
    std::cout << d.code << ": " << d.message << "\n";
  if (diagnostics.empty()) {
    std::cout << "ok: " << graph.node_count() << " nodes, " << graph.edges().size()
              << " edges\n";
    return kExitOk;
  }
  return kExitDataError;
}

int cmd_slice(const std::string& graph_path, const std::string& criterion,
              const CommonFlags& flags) {
  DependenceGraph graph = load_graph(graph_path);
  SliceOptions opts;
  opts.traverse_containment = !flags.exclude_containment;
  HdSlice slice = hd_slice(graph, SlicingCriterion{criterion}, opts);

  print_id_set("Q1", slice.q1);
  print_id_set("Q2", slice.q2);
  print_id_set("Q3", slice.q3);
  print_id_set("Q", slice.q);
  print_id_set("P1", slice.affected_packages);
  print_id_set("C1", slice.affected_classes);
  print_id_set("M1", slice.affected_methods);
  print_id_set("S1", slice.affected_statements);

  if (!flags.report_path.empty()) {
    nlohmann::json doc;
    doc["criterion"] = criterion;
    doc["q1"] = slice.q1;
    doc["q2"] = slice.q2;
    doc["q3"] = slice.q3;
    doc["q"] = slice.q;
    doc["p1"] = slice.affected_packages;
    doc["c1"] = slice.affected_classes;
    doc["m1"] = slice.affected_methods;
    doc["s1"] = slice.affected_statements;
    write_file(flags.report_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

std::pair<DependenceGraph, AccReport> slice_and_acc(const std::string& graph_path,
                                                    const std::string& criterion,
                                                    const CommonFlags& flags) {
  DependenceGraph graph = load_graph(graph_path);
  SliceOptions opts;
  opts.traverse_containment = !flags.exclude_containment;
  HdSlice slice = hd_slice(graph, SlicingCriterion{criterion}, opts);
  DependenceGraph asg = build_asg(graph, slice);
  AccReport report = rollup(asg, compute_raw_acc(asg));
  report.slice_acc = slice_acc(report);
  return {std::move(asg), std::move(report)};
}

int cmd_acc(const std::string& graph_path, const std::string& criterion,
            const CommonFlags& flags) {
  auto [asg, report] = slice_and_acc(graph_path, criterion, flags);
  std::cout << "node inflow outflow acc_raw acc_updated\n";
  for (const NodeAcc& a : report.nodes)
    std::cout << a.id << ' ' << a.inflow_size << ' ' << a.outflow_size << ' '
              << fixed6(a.acc_raw) << ' ' << fixed6(a.acc_updated) << "\n";
  std::cout << "slice_acc " << fixed6(report.slice_acc) << "\n";

  if (!flags.report_path.empty()) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const NodeAcc& a : report.nodes)
      doc["nodes"].push_back({{"id", a.id},
                              {"inflow_size", a.inflow_size},
                              {"outflow_size", a.outflow_size},
                              {"psi_size", a.psi_size},
                              {"acc_raw", round6(a.acc_raw)},
                              {"acc_updated", round6(a.acc_updated)}});
    doc["slice_acc"] = round6(report.slice_acc);
    write_file(flags.report_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_weights(const std::string& graph_path, const std::string& criterion,
                const CommonFlags& flags) {
  auto [asg, report] = slice_and_acc(graph_path, criterion, flags);
  WeightMap map = flags.weights_mode == "threshold"
                      ? assign_weights_threshold(report)
                      : assign_weights_kmeans(report, flags.seed);
  std::cout << "mode " << to_string(map.mode) << "\n";
  if (map.moderate_lower)
    std::cout << "moderate_lower " << fixed6(*map.moderate_lower) << "\n";
  if (map.critical_lower)
    std::cout << "critical_lower " << fixed6(*map.critical_lower) << "\n";
  std::cout << "node acc weight band\n";
  for (const NodeWeight& w : map.nodes)
    std::cout << w.id << ' ' << fixed6(w.acc) << ' ' << w.weight << ' '
              << to_string(w.band) << "\n";

  if (!flags.report_path.empty()) {
    nlohmann::json doc;
    doc["mode"] = std::string(to_string(map.mode));
    doc["moderate_lower"] =
        map.moderate_lower ? nlohmann::json(round6(*map.moderate_lower)) : nullptr;
    doc["critical_lower"] =
        map.critical_lower ? nlohmann::json(round6(*map.critical_lower)) : nullptr;
    doc["nodes"] = nlohmann::json::array();
    for (const NodeWeight& w : map.nodes)
      doc["nodes"].push_back({{"id", w.id},
                              {"acc", round6(w.acc)},
                              {"weight", w.weight},
                              {"band", std::string(to_string(w.band))}});
    write_file(flags.report_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_prioritize(const std::string& graph_path, const std::string& criterion,
                   const std::string& coverage_path, const std::string& faults_path,
                   const CommonFlags& flags) {
  DependenceGraph graph = load_graph(graph_path);
  std::vector<TestCase> suite = parse_coverage(read_file(coverage_path));
  FaultMatrix faults;
  bool have_faults = !faults_path.empty();
  if (have_faults) faults = parse_faults(read_file(faults_path));

  PipelineResult result = run_pipeline(graph, criterion, suite, to_options(flags),
                                       have_faults ? &faults : nullptr);
  print_warnings(result.warnings);

  std::cout << "rank test wtc wtm wtw wt\n";
  for (const RankedTest& t : result.suite.tests)
    std::cout << t.rank << ' ' << t.id << ' ' << t.weights.wtc << ' ' << t.weights.wtm
              << ' ' << t.weights.wtw << ' ' << t.weights.wt << "\n";
  std::cout << "order:";
  for (const RankedTest& t : result.suite.tests) std::cout << ' ' << t.id;
  std::cout << "\n";
  for (const auto& group : result.suite.tie_groups) {
    std::cout << "tie:";
    for (const std::string& id : group) std::cout << ' ' << id;
    std::cout << "\n";
  }
  if (result.apfd_value) {
    std::cout << "apfd " << std::fixed << std::setprecision(5) << *result.apfd_value
              << "\n";
    std::cout << "curve:";
    for (double p : *result.curve) std::cout << ' ' << fixed6(p);
    std::cout << "\n";
  }
  std::cout << "prioritization_ms " << fixed6(result.timings.prioritize_ms) << "\n";

  maybe_write_report(flags.report_path, report_json(result));
  return kExitOk;
}

int cmd_evaluate(const std::string& ordering_arg, const std::string& faults_path,
                 bool permissive) {
  std::vector<std::string> ordering =
      std::filesystem::exists(ordering_arg)
          ? parse_ordering_text(read_file(ordering_arg))
          : parse_ordering_inline(ordering_arg);
  FaultMatrix faults = parse_faults(read_file(faults_path));

  double value = apfd(ordering, faults, permissive);
  auto curve = percent_detected_curve(ordering, faults, permissive);
  std::cout << "apfd " << std::fixed << std::setprecision(5) << value << "\n";
  std::cout << "curve:";
  for (double p : curve) std::cout << ' ' << fixed6(p);
  std::cout << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& graph_path, const std::string& criterion,
                const std::string& coverage_path, const std::string& faults_path,
                const CommonFlags& flags) {
  DependenceGraph graph = load_graph(graph_path);
  std::vector<TestCase> suite = parse_coverage(read_file(coverage_path));
  FaultMatrix faults = parse_faults(read_file(faults_path));

  PipelineResult fpanc = run_pipeline(graph, criterion, suite, to_options(flags), &faults);
  print_warnings(fpanc.warnings);

  AncResult anc = anc_prioritize(suite, fpanc.slice.q);
  std::vector<std::string> input_order;
  for (const TestCase& t : suite) input_order.push_back(t.id);

  struct Row {
    std::string strategy;
    std::vector<std::string> order;
    double apfd_value;
  };
  std::vector<Row> rows;
  rows.push_back({"FPANC", {}, *fpanc.apfd_value});
  for (const RankedTest& t : fpanc.suite.tests) rows.back().order.push_back(t.id);
  rows.push_back({"ANC", anc.order(), apfd(anc.order(), faults, flags.permissive)});
  rows.push_back({"input-order", input_order, apfd(input_order, faults, flags.permissive)});

  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].apfd_value > rows[best].apfd_value) best = i;

  std::cout << "strategy apfd order\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::cout << rows[i].strategy << (i == best ? "*" : "") << ' ' << std::fixed
              << std::setprecision(5) << rows[i].apfd_value << ' ';
    for (std::size_t j = 0; j < rows[i].order.size(); ++j)
      std::cout << (j ? "," : "") << rows[i].order[j];
    std::cout << "\n";
  }
  std::cout << "best " << rows[best].strategy << "\n";

  if (!flags.report_path.empty()) {
    nlohmann::json doc;
    doc["strategies"] = nlohmann::json::array();
    for (const Row& row : rows)
      doc["strategies"].push_back({{"strategy", row.strategy},
                                   {"apfd", round6(row.apfd_value)},
                                   {"order", row.order}});
    doc["best"] = rows[best].strategy;
    write_file(flags.report_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_weights) {
  if (with_weights) {
    cmd->add_option("--weights", flags.weights_mode, "Weighting mode")
        ->check(CLI::IsMember({"kmeans", "threshold"}))
        ->default_val("kmeans");
    cmd->add_option("--seed", flags.seed, "Clustering seed (0 = canonical start)")
        ->default_val(0);
    cmd->add_option("--inject-weights", flags.inject_weights_path,
                    "Bypass coupling and clustering with a node-weight file");
  }
  cmd->add_flag("--exclude-containment", flags.exclude_containment,
                "Keep containment edges out of the slicing traversals");
  cmd->add_option("--report", flags.report_path, "Write the JSON report here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change-impact slicing and coupling-driven regression test prioritization"};
  app.require_subcommand(1);

  std::string graph_path, criterion, coverage_path, faults_path, ordering_arg;
  CommonFlags flags;
  bool permissive = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a dependence graph file");
  validate_cmd->add_option("graph", graph_path, "Graph file")->required();

  auto* slice_cmd = app.add_subcommand("slice", "Hierarchical-decomposition slice");
  slice_cmd->add_option("graph", graph_path, "Graph file")->required();
  slice_cmd->add_option("criterion", criterion, "Slicing criterion node id")->required();
  add_common_flags(slice_cmd, flags, false);

  auto* acc_cmd = app.add_subcommand("acc", "Affected component coupling per node");
  acc_cmd->add_option("graph", graph_path, "Graph file")->required();
  acc_cmd->add_option("criterion", criterion, "Slicing criterion node id")->required();
  add_common_flags(acc_cmd, flags, false);

  auto* weights_cmd = app.add_subcommand("weights", "Fault-proneness weight per node");
  weights_cmd->add_option("graph", graph_path, "Graph file")->required();
  weights_cmd->add_option("criterion", criterion, "Slicing criterion node id")->required();
  add_common_flags(weights_cmd, flags, true);

  auto* prio_cmd = app.add_subcommand("prioritize", "Order a test suite");
  prio_cmd->add_option("graph", graph_path, "Graph file")->required();
  prio_cmd->add_option("criterion", criterion, "Slicing criterion node id")->required();
  prio_cmd->add_option("coverage", coverage_path, "Coverage file")->required();
  prio_cmd->add_option("--faults", faults_path, "Evaluate the ordering with this matrix");
  prio_cmd->add_flag("--permissive", flags.permissive,
                     "Score undetected faults at position n+1");
  add_common_flags(prio_cmd, flags, true);

  auto* eval_cmd = app.add_subcommand("evaluate", "APFD of an ordering");
  eval_cmd->add_option("ordering", ordering_arg, "Ordering file or inline T1,T2,...")
      ->required();
  eval_cmd->add_option("faults", faults_path, "Fault matrix file")->required();
  eval_cmd->add_flag("--permissive", permissive, "Score undetected faults at n+1");

  auto* compare_cmd = app.add_subcommand("compare", "FPANC vs ANC vs input order");
  compare_cmd->add_option("graph", graph_path, "Graph file")->required();
  compare_cmd->add_option("criterion", criterion, "Slicing criterion node id")->required();
  compare_cmd->add_option("coverage", coverage_path, "Coverage file")->required();
  compare_cmd->add_option("faults", faults_path, "Fault matrix file")->required();
  compare_cmd->add_flag("--permissive", flags.permissive,
                        "Score undetected faults at position n+1");
  add_common_flags(compare_cmd, flags, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(graph_path);
    if (slice_cmd->parsed()) return cmd_slice(graph_path, criterion, flags);
    if (acc_cmd->parsed()) return cmd_acc(graph_path, criterion, flags);
    if (weights_cmd->parsed()) return cmd_weights(graph_path, criterion, flags);
    if (prio_cmd->parsed())
      return cmd_prioritize(graph_path, criterion, coverage_path, faults_path, flags);
    if (eval_cmd->parsed()) return cmd_evaluate(ordering_arg, faults_path, permissive);
    if (compare_cmd->parsed())
      return cmd_compare(graph_path, criterion, coverage_path, faults_path, flags);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const ComputeError& e) {
    std::cerr << "compute error: " << e.what() << "\n";
    return kExitComputeError;
  }
  return kExitOk;
}
