#include "sliceprio/slicer.hpp"

#include <algorithm>

namespace sliceprio {

namespace {

void check_criterion(const DependenceGraph& graph, const SlicingCriterion& criterion) {
  std::size_t i = graph.require_index(criterion.node);
  NodeKind k = graph.node_at(i).kind;
  if (is_hierarchy_kind(k))
    throw DataError("invalid slicing criterion '" + criterion.node +
                    "': must be a statement, parameter, or attribute node");
}

std::vector<std::size_t> to_indices(const DependenceGraph& graph,
                                    std::span<const std::string> ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(graph.require_index(id));
  return out;
}

std::vector<std::string> visited_ids(const DependenceGraph& graph, const ReachSet& r) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < graph.node_count(); ++i)
    if (r.visited[i]) out.push_back(graph.node_at(i).id);
  return out;
}

std::vector<Edge> traversed_edges(const DependenceGraph& graph, const ReachSet& r) {
  std::vector<Edge> out;
  for (std::size_t e = 0; e < graph.edges().size(); ++e)
    if (r.edge_traversed[e]) out.push_back(graph.edges()[e]);
  return out;
}

EdgeKindSet with_containment(EdgeKindSet kinds, const SliceOptions& opts) {
  if (!opts.traverse_containment) kinds.insert(EdgeKind::Containment);
  return kinds;
}

}  // namespace

std::vector<std::string> forward_mark(const DependenceGraph& graph,
                                      const SlicingCriterion& criterion,
                                      const SliceOptions& opts) {
  check_criterion(graph, criterion);
  EdgeKindSet excluded = with_containment({EdgeKind::MethodOverridden}, opts);
  std::size_t seeds[1] = {graph.require_index(criterion.node)};
  return visited_ids(graph, reach_from_set(graph, seeds, Direction::Forward, excluded));
}

std::pair<std::vector<std::string>, std::vector<Edge>> backward_pass1(
    const DependenceGraph& graph, std::span<const std::string> q1,
    const SliceOptions& opts) {
  EdgeKindSet excluded = with_containment(
      {EdgeKind::PolymorphicCall, EdgeKind::InheritedMembership, EdgeKind::ParameterOut,
       EdgeKind::GenericOut},
      opts);
  // The union over per-seed backward closures equals one closure of the seed
  // set, for both the node set and the traversed edge set.
  auto seeds = to_indices(graph, q1);
  ReachSet r = reach_from_set(graph, seeds, Direction::Backward, excluded);
  return {visited_ids(graph, r), traversed_edges(graph, r)};
}

std::vector<std::string> backward_pass2(const DependenceGraph& graph,
                                        std::span<const std::string> q2,
                                        std::span<const Edge> e1,
                                        const SliceOptions& opts) {
  EdgeKindSet excluded = with_containment({EdgeKind::ParameterIn, EdgeKind::GenericIn}, opts);
  std::vector<bool> banned = mark_excluded_edges(graph, e1);
  auto seeds = to_indices(graph, q2);
  ReachSet r = reach_from_set(graph, seeds, Direction::Backward, excluded, &banned);
  return visited_ids(graph, r);
}

HdSlice hd_slice(const DependenceGraph& graph, const SlicingCriterion& criterion,
                 const SliceOptions& opts) {
  HdSlice slice;
  slice.q1 = forward_mark(graph, criterion, opts);
  auto [q2, e1] = backward_pass1(graph, slice.q1, opts);
  slice.q2 = std::move(q2);
  slice.pass1_traversed = std::move(e1);
  slice.q3 = backward_pass2(graph, slice.q2, slice.pass1_traversed, opts);

  std::vector<bool> in_q(graph.node_count(), false);
  for (const auto& set : {&slice.q1, &slice.q2, &slice.q3})
    for (const std::string& id : *set) in_q[graph.require_index(id)] = true;

  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (!in_q[i]) continue;
    const Node& n = graph.node_at(i);
    slice.q.push_back(n.id);
    switch (n.kind) {
      case NodeKind::Package: slice.affected_packages.push_back(n.id); break;
      case NodeKind::Class: slice.affected_classes.push_back(n.id); break;
      case NodeKind::Method: slice.affected_methods.push_back(n.id); break;
      default: slice.affected_statements.push_back(n.id); break;
    }
  }
  return slice;
}

DependenceGraph build_asg(const DependenceGraph& graph, const HdSlice& slice) {
  return induced_subgraph(graph, slice.q);
}

}  // namespace sliceprio
