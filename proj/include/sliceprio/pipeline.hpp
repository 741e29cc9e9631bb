#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sliceprio/acc.hpp"
#include "sliceprio/prioritizer.hpp"
#include "sliceprio/slicer.hpp"
#include "sliceprio/weights.hpp"

namespace sliceprio {

struct PipelineOptions {
  WeightMode weights_mode = WeightMode::KMeans;
  unsigned seed = 0;
  bool permissive = false;
  bool exclude_containment = false;
  // When set, the coupling and clustering stages are bypassed entirely and
  // the supplied per-node weights drive the prioritization.
  std::optional<std::map<std::string, int>> injected_weights;
};

struct StageTimings {
  double slice_ms = 0.0;
  double acc_ms = 0.0;
  double weights_ms = 0.0;
  double prioritize_ms = 0.0;  // test weight computation plus the ordering
  double total_ms = 0.0;
};

struct PipelineResult {
  HdSlice slice;
  DependenceGraph asg;
  std::optional<AccReport> acc;  // absent when weights were injected
  std::optional<double> asg_slice_acc;
  WeightMap weights;
  PrioritizedSuite suite;
  std::optional<double> apfd_value;
  std::optional<std::vector<double>> curve;
  std::vector<std::string> warnings;
  StageTimings timings;
};

// Slice -> ASG -> coupling -> weights -> test weights -> ordering, with the
// optional APFD evaluation when a fault matrix is supplied.
PipelineResult run_pipeline(const DependenceGraph& graph, const std::string& criterion,
                            std::span<const TestCase> coverage,
                            const PipelineOptions& options = {},
                            const FaultMatrix* faults = nullptr);

// The machine-readable run report (JSON text). Reals are fixed at six
// decimal places so repeated runs serialize identically.
std::string report_json(const PipelineResult& result);

double round6(double value);

}  // namespace sliceprio
