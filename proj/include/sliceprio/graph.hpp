#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sliceprio/errors.hpp"

namespace sliceprio {

enum class NodeKind : std::uint8_t {
  Package,
  Class,
  Method,
  Statement,
  FormalIn,
  FormalOut,
  ActualIn,
  ActualOut,
  Attribute,
};

enum class EdgeKind : std::uint8_t {
  ControlDep,
  DataDep,
  TypeDep,
  Call,
  ParameterIn,
  ParameterOut,
  GenericIn,
  GenericOut,
  PolymorphicCall,
  InheritedMembership,
  MethodOverridden,
  Containment,
  Summary,
};

inline constexpr int kNodeKindCount = 9;
inline constexpr int kEdgeKindCount = 13;

std::string_view to_string(NodeKind kind);
std::string_view to_string(EdgeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view name);
std::optional<EdgeKind> edge_kind_from_string(std::string_view name);

inline bool is_parameter_kind(NodeKind k) {
  return k == NodeKind::FormalIn || k == NodeKind::FormalOut ||
         k == NodeKind::ActualIn || k == NodeKind::ActualOut;
}

inline bool is_hierarchy_kind(NodeKind k) {
  return k == NodeKind::Package || k == NodeKind::Class || k == NodeKind::Method;
}

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Statement;
  std::string label;
  std::optional<std::string> parent;  // containment parent; agrees with Containment edges
};

struct Edge {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::DataDep;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Small fixed-size set over EdgeKind.
class EdgeKindSet {
public:
  EdgeKindSet() = default;
  EdgeKindSet(std::initializer_list<EdgeKind> kinds) {
    for (EdgeKind k : kinds) insert(k);
  }

  void insert(EdgeKind k) { bits_ |= bit(k); }
  void erase(EdgeKind k) { bits_ &= ~bit(k); }
  bool contains(EdgeKind k) const { return (bits_ & bit(k)) != 0; }
  bool empty() const { return bits_ == 0; }

private:
  static std::uint16_t bit(EdgeKind k) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(k));
  }
  std::uint16_t bits_ = 0;
};

// An edge is skipped when its kind is excluded OR the exact triple is listed.
struct EdgeFilter {
  EdgeKindSet excluded;
  std::vector<Edge> excluded_edges;
};

struct Diagnostic {
  std::string code;
  std::string message;
};

enum class Direction { Forward, Backward };

// Immutable typed multigraph with a containment hierarchy. Construction
// accepts arbitrary node/edge lists; semantic problems are reported by
// validate(), and traversals simply ignore unresolvable edges.
class DependenceGraph {
public:
  struct Arc {
    std::uint32_t neighbor;
    std::uint32_t edge;  // index into edges()
  };

  DependenceGraph() = default;
  DependenceGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }

  bool has_node(std::string_view id) const { return index_of(id).has_value(); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  // Throws DataError when the id is unknown.
  std::size_t require_index(std::string_view id) const;
  const Node& node_at(std::size_t i) const { return nodes_[i]; }

  std::span<const Arc> out_arcs(std::size_t node) const;
  std::span<const Arc> in_arcs(std::size_t node) const;

  // Containment read from parent fields.
  std::optional<std::size_t> parent_of(std::size_t node) const { return parent_index_[node]; }
  std::span<const std::uint32_t> children_of(std::size_t node) const;

  // Edge endpoints resolved to indices; unresolvable edges report false.
  bool resolve_edge(std::size_t edge, std::size_t& src, std::size_t& dst) const;

  const std::vector<std::string>& duplicate_ids() const { return duplicate_ids_; }

private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> duplicate_ids_;

  // CSR adjacency over resolvable edges.
  std::vector<Arc> out_flat_, in_flat_;
  std::vector<std::uint32_t> out_off_, in_off_;

  std::vector<std::optional<std::size_t>> parent_index_;
  std::vector<std::uint32_t> children_flat_;
  std::vector<std::uint32_t> children_off_;
};

// Returns one diagnostic per invariant violation; an empty list means the
// graph is well formed. Violations are data, never exceptions.
std::vector<Diagnostic> validate(const DependenceGraph& graph);

struct ReachResult {
  std::vector<std::string> nodes;  // includes the start node, in graph order
  std::vector<Edge> traversed;     // every admissible edge whose tail (in
                                   // traversal direction) was visited
};

ReachResult reachable(const DependenceGraph& graph, std::string_view start,
                      Direction direction, const EdgeFilter& filter = {});

// Index-level multi-seed reachability used by the slicer and the tests.
struct ReachSet {
  std::vector<bool> visited;         // per node
  std::vector<bool> edge_traversed;  // per edge
};

ReachSet reach_from_set(const DependenceGraph& graph, std::span<const std::size_t> seeds,
                        Direction direction, const EdgeKindSet& excluded_kinds,
                        const std::vector<bool>* excluded_edges = nullptr);

// Marks the edge indices matching the filter's explicit triples.
std::vector<bool> mark_excluded_edges(const DependenceGraph& graph,
                                      std::span<const Edge> triples);

DependenceGraph induced_subgraph(const DependenceGraph& graph,
                                 std::span<const std::string> keep);

}  // namespace sliceprio
