#include "sliceprio/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

namespace sliceprio {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

double round6(double value) { return std::round(value * 1e6) / 1e6; }

PipelineResult run_pipeline(const DependenceGraph& graph, const std::string& criterion,
                            std::span<const TestCase> coverage,
                            const PipelineOptions& options, const FaultMatrix* faults) {
  PipelineResult result;
  const auto total_start = Clock::now();

  SliceOptions slice_opts;
  slice_opts.traverse_containment = !options.exclude_containment;

  auto stage = Clock::now();
  try {
    result.slice = hd_slice(graph, SlicingCriterion{criterion}, slice_opts);
    result.asg = build_asg(graph, result.slice);
  } catch (const Error& e) {
    throw DataError(std::string("slice stage: ") + e.what());
  }
  result.timings.slice_ms = ms_since(stage);

  if (options.injected_weights) {
    stage = Clock::now();
    result.weights =
        weight_map_from_injection(result.asg, *options.injected_weights, &result.warnings);
    result.timings.weights_ms = ms_since(stage);
  } else {
    stage = Clock::now();
    try {
      AccReport raw = compute_raw_acc(result.asg);
      AccReport updated = rollup(result.asg, raw);
      updated.slice_acc = slice_acc(updated);
      result.acc = std::move(updated);
      result.asg_slice_acc = result.acc->slice_acc;
    } catch (const Error& e) {
      throw ComputeError(std::string("coupling stage: ") + e.what());
    }
    result.timings.acc_ms = ms_since(stage);

    stage = Clock::now();
    try {
      result.weights = options.weights_mode == WeightMode::Threshold
                           ? assign_weights_threshold(*result.acc)
                           : assign_weights_kmeans(*result.acc, options.seed);
    } catch (const Error& e) {
      throw ComputeError(std::string("weighting stage: ") + e.what());
    }
    result.timings.weights_ms = ms_since(stage);
  }

  stage = Clock::now();
  try {
    result.suite = prioritize(coverage, result.weights, &result.warnings);
  } catch (const Error& e) {
    throw ComputeError(std::string("prioritization stage: ") + e.what());
  }
  result.timings.prioritize_ms = ms_since(stage);

  if (faults) {
    std::vector<std::string> order;
    for (const RankedTest& t : result.suite.tests) order.push_back(t.id);
    try {
      result.apfd_value = apfd(order, *faults, options.permissive);
      result.curve = percent_detected_curve(order, *faults, options.permissive);
    } catch (const Error& e) {
      throw ComputeError(std::string("evaluation stage: ") + e.what());
    }
  }

  result.timings.total_ms = ms_since(total_start);
  return result;
}

std::string report_json(const PipelineResult& result) {
  using nlohmann::json;
  json doc;

  json slice;
  slice["q1"] = result.slice.q1;
  slice["q2"] = result.slice.q2;
  slice["q3"] = result.slice.q3;
  slice["q"] = result.slice.q;
  slice["p1"] = result.slice.affected_packages;
  slice["c1"] = result.slice.affected_classes;
  slice["m1"] = result.slice.affected_methods;
  slice["s1"] = result.slice.affected_statements;
  slice["counts"] = {{"q1", result.slice.q1.size()},
                     {"q2", result.slice.q2.size()},
                     {"q3", result.slice.q3.size()},
                     {"q", result.slice.q.size()},
                     {"p1", result.slice.affected_packages.size()},
                     {"c1", result.slice.affected_classes.size()},
                     {"m1", result.slice.affected_methods.size()},
                     {"s1", result.slice.affected_statements.size()}};
  doc["slice"] = std::move(slice);
  doc["asg"] = {{"nodes", result.asg.node_count()}, {"edges", result.asg.edges().size()}};

  json nodes = json::array();
  for (const NodeWeight& w : result.weights.nodes) {
    json jn;
    jn["id"] = w.id;
    if (result.acc) {
      const NodeAcc* a = result.acc->find(w.id);
      jn["inflow_size"] = a->inflow_size;
      jn["outflow_size"] = a->outflow_size;
      jn["acc_raw"] = round6(a->acc_raw);
      jn["acc_updated"] = round6(a->acc_updated);
    } else {
      jn["inflow_size"] = nullptr;
      jn["outflow_size"] = nullptr;
      jn["acc_raw"] = nullptr;
      jn["acc_updated"] = nullptr;
    }
    jn["weight"] = w.weight;
    jn["band"] = std::string(to_string(w.band));
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  doc["slice_acc"] =
      result.asg_slice_acc ? json(round6(*result.asg_slice_acc)) : json(nullptr);

  json weights;
  weights["mode"] = std::string(to_string(result.weights.mode));
  weights["moderate_lower"] = result.weights.moderate_lower
                                  ? json(round6(*result.weights.moderate_lower))
                                  : json(nullptr);
  weights["critical_lower"] = result.weights.critical_lower
                                  ? json(round6(*result.weights.critical_lower))
                                  : json(nullptr);
  doc["weights"] = std::move(weights);

  json tests = json::array();
  json order = json::array();
  for (const RankedTest& t : result.suite.tests) {
    tests.push_back({{"id", t.id},
                     {"wtc", t.weights.wtc},
                     {"wtm", t.weights.wtm},
                     {"wtw", t.weights.wtw},
                     {"wt", t.weights.wt},
                     {"rank", t.rank}});
    order.push_back(t.id);
  }
  doc["tests"] = std::move(tests);
  doc["order"] = std::move(order);
  doc["tie_groups"] = result.suite.tie_groups;

  if (result.apfd_value) {
    json eval;
    eval["apfd"] = round6(*result.apfd_value);
    json curve = json::array();
    for (double p : *result.curve) curve.push_back(round6(p));
    eval["curve"] = std::move(curve);
    doc["evaluation"] = std::move(eval);
  }

  doc["timings_ms"] = {{"slice", round6(result.timings.slice_ms)},
                       {"acc", round6(result.timings.acc_ms)},
                       {"weights", round6(result.timings.weights_ms)},
                       {"prioritize", round6(result.timings.prioritize_ms)},
                       {"total", round6(result.timings.total_ms)}};
  doc["warnings"] = result.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace sliceprio
