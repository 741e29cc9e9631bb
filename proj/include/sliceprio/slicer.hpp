#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sliceprio/graph.hpp"

namespace sliceprio {

// The change point, pre-resolved to a node id by the graph producer. Must
// name a statement, parameter, or attribute node.
struct SlicingCriterion {
  std::string node;
};

struct SliceOptions {
  // Whether containment edges participate in the traversals. Fixtures that
  // model membership through other edge kinds can switch this off.
  bool traverse_containment = true;
};

struct HdSlice {
  std::vector<std::string> q1;  // forward marking
  std::vector<std::string> q2;  // backward pass 1
  std::vector<std::string> q3;  // backward pass 2
  std::vector<std::string> q;   // q1 ∪ q2 ∪ q3

  std::vector<std::string> affected_packages;    // P1
  std::vector<std::string> affected_classes;     // C1
  std::vector<std::string> affected_methods;     // M1
  std::vector<std::string> affected_statements;  // S1 (everything else)

  std::vector<Edge> pass1_traversed;  // E1, withheld from pass 2
};

// Forward traversal from the criterion, skipping method-overridden edges.
std::vector<std::string> forward_mark(const DependenceGraph& graph,
                                      const SlicingCriterion& criterion,
                                      const SliceOptions& opts = {});

// Backward pass 1 from every q1 node, skipping polymorphic-call,
// inherited-membership, parameter-out, and generic-out edges. Also returns
// the traversed edge set E1.
std::pair<std::vector<std::string>, std::vector<Edge>> backward_pass1(
    const DependenceGraph& graph, std::span<const std::string> q1,
    const SliceOptions& opts = {});

// Backward pass 2 from every q2 node, skipping parameter-in and generic-in
// edges plus every edge traversed in pass 1.
std::vector<std::string> backward_pass2(const DependenceGraph& graph,
                                        std::span<const std::string> q2,
                                        std::span<const Edge> e1,
                                        const SliceOptions& opts = {});

HdSlice hd_slice(const DependenceGraph& graph, const SlicingCriterion& criterion,
                 const SliceOptions& opts = {});

// The affected slice graph: subgraph induced by the slice.
DependenceGraph build_asg(const DependenceGraph& graph, const HdSlice& slice);

}  // namespace sliceprio
