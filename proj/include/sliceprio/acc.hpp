#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sliceprio/graph.hpp"

namespace sliceprio {

struct NodeAcc {
  std::string id;
  int inflow_size = 0;
  int outflow_size = 0;
  int psi_size = 0;       // |inflow ∪ outflow|, the node itself excluded
  double acc_raw = 0.0;    // psi_size / (|N_a| - 1)
  double acc_updated = 0.0;  // hierarchical roll-up; equals acc_raw elsewhere
};

struct AccReport {
  std::vector<NodeAcc> nodes;
  double slice_acc = 0.0;

  const NodeAcc* find(std::string_view id) const;
};

// Transitive predecessors of n over every edge kind of the ASG, n excluded.
std::vector<std::string> inflow(const DependenceGraph& asg, std::string_view node);

// Transitive successors of n, n excluded.
std::vector<std::string> outflow(const DependenceGraph& asg, std::string_view node);

// |inflow ∪ outflow| / (|N_a| - 1). Undefined on a single-node graph.
double acc_raw(const DependenceGraph& asg, std::string_view node);

// Per-node flows and raw coupling for the whole ASG, computed through a
// bit-parallel transitive closure. acc_updated starts equal to acc_raw.
AccReport compute_raw_acc(const DependenceGraph& asg);

// Averages members into methods, then classes, then packages. Method members
// are the contained formal parameter and statement nodes (raw values);
// class members are attributes and methods, package members are classes and
// subpackages (both consuming members' updated values, deepest first).
AccReport rollup(const DependenceGraph& asg, const AccReport& raw);

// Mean of the per-node coupling values (updated where the roll-up applies).
double slice_acc(const AccReport& report);

}  // namespace sliceprio
