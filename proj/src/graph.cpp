#include "sliceprio/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <unordered_set>

namespace sliceprio {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kNodeKindNames = {
    "package", "class", "method", "statement", "formal_in",
    "formal_out", "actual_in", "actual_out", "attribute",
};

constexpr std::array<std::string_view, kEdgeKindCount> kEdgeKindNames = {
    "control_dep",  "data_dep",      "type_dep",
    "call",         "parameter_in",  "parameter_out",
    "generic_in",   "generic_out",   "polymorphic_call",
    "inherited_membership", "method_overridden", "containment",
    "summary",
};

}  // namespace

std::string_view to_string(NodeKind kind) {
  return kNodeKindNames[static_cast<std::size_t>(kind)];
}

std::string_view to_string(EdgeKind kind) {
  return kEdgeKindNames[static_cast<std::size_t>(kind)];
}

std::optional<NodeKind> node_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNodeKindNames.size(); ++i)
    if (kNodeKindNames[i] == name) return static_cast<NodeKind>(i);
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kEdgeKindNames.size(); ++i)
    if (kEdgeKindNames[i] == name) return static_cast<EdgeKind>(i);
  return std::nullopt;
}

DependenceGraph::DependenceGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto [it, inserted] = index_.emplace(nodes_[i].id, i);
    if (!inserted) duplicate_ids_.push_back(nodes_[i].id);
  }

  const std::size_t n = nodes_.size();
  std::vector<std::uint32_t> out_deg(n, 0), in_deg(n, 0);
  for (const Edge& e : edges_) {
    auto s = index_.find(e.src);
    auto d = index_.find(e.dst);
    if (s == index_.end() || d == index_.end()) continue;
    ++out_deg[s->second];
    ++in_deg[d->second];
  }
  out_off_.assign(n + 1, 0);
  in_off_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out_off_[i + 1] = out_off_[i] + out_deg[i];
    in_off_[i + 1] = in_off_[i] + in_deg[i];
  }
  out_flat_.resize(out_off_[n]);
  in_flat_.resize(in_off_[n]);
  std::vector<std::uint32_t> out_pos(out_off_.begin(), out_off_.end() - 1);
  std::vector<std::uint32_t> in_pos(in_off_.begin(), in_off_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto s = index_.find(edges_[e].src);
    auto d = index_.find(edges_[e].dst);
    if (s == index_.end() || d == index_.end()) continue;
    out_flat_[out_pos[s->second]++] = {static_cast<std::uint32_t>(d->second),
                                       static_cast<std::uint32_t>(e)};
    in_flat_[in_pos[d->second]++] = {static_cast<std::uint32_t>(s->second),
                                     static_cast<std::uint32_t>(e)};
  }

  parent_index_.assign(n, std::nullopt);
  std::vector<std::uint32_t> child_deg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!nodes_[i].parent) continue;
    auto p = index_.find(*nodes_[i].parent);
    if (p == index_.end() || p->second == i) continue;
    parent_index_[i] = p->second;
    ++child_deg[p->second];
  }
  children_off_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) children_off_[i + 1] = children_off_[i] + child_deg[i];
  children_flat_.resize(children_off_[n]);
  std::vector<std::uint32_t> child_pos(children_off_.begin(), children_off_.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (parent_index_[i]) children_flat_[child_pos[*parent_index_[i]]++] = static_cast<std::uint32_t>(i);
}

std::optional<std::size_t> DependenceGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t DependenceGraph::require_index(std::string_view id) const {
  auto i = index_of(id);
  if (!i) throw DataError("unknown node id '" + std::string(id) + "'");
  return *i;
}

std::span<const DependenceGraph::Arc> DependenceGraph::out_arcs(std::size_t node) const {
  return {out_flat_.data() + out_off_[node], out_off_[node + 1] - out_off_[node]};
}

std::span<const DependenceGraph::Arc> DependenceGraph::in_arcs(std::size_t node) const {
  return {in_flat_.data() + in_off_[node], in_off_[node + 1] - in_off_[node]};
}

std::span<const std::uint32_t> DependenceGraph::children_of(std::size_t node) const {
  return {children_flat_.data() + children_off_[node],
          children_off_[node + 1] - children_off_[node]};
}

bool DependenceGraph::resolve_edge(std::size_t edge, std::size_t& src, std::size_t& dst) const {
  auto s = index_of(edges_[edge].src);
  auto d = index_of(edges_[edge].dst);
  if (!s || !d) return false;
  src = *s;
  dst = *d;
  return true;
}

std::vector<Diagnostic> validate(const DependenceGraph& graph) {
  std::vector<Diagnostic> out;
  const auto& nodes = graph.nodes();
  const auto& edges = graph.edges();

  for (const std::string& id : graph.duplicate_ids())
    out.push_back({"duplicate-node-id", "node id '" + id + "' occurs more than once"});

  std::set<std::tuple<std::string, std::string, EdgeKind>> seen;
  for (const Edge& e : edges) {
    if (!graph.has_node(e.src))
      out.push_back({"dangling-endpoint", "edge " + e.src + " -> " + e.dst + " (" +
                                              std::string(to_string(e.kind)) +
                                              "): unknown source node"});
    if (!graph.has_node(e.dst))
      out.push_back({"dangling-endpoint", "edge " + e.src + " -> " + e.dst + " (" +
                                              std::string(to_string(e.kind)) +
                                              "): unknown destination node"});
    if (!seen.insert({e.src, e.dst, e.kind}).second)
      out.push_back({"duplicate-edge", "duplicate edge " + e.src + " -> " + e.dst + " (" +
                                           std::string(to_string(e.kind)) + ")"});
  }

  // Containment edges must agree with the parent fields; edge direction is
  // parent -> child.
  std::set<std::pair<std::string, std::string>> containment_edges;
  for (const Edge& e : edges)
    if (e.kind == EdgeKind::Containment) containment_edges.insert({e.src, e.dst});
  std::set<std::pair<std::string, std::string>> parent_pairs;
  for (const Node& n : nodes) {
    if (!n.parent) continue;
    if (!graph.has_node(*n.parent)) {
      out.push_back({"missing-parent",
                     "node '" + n.id + "' names unknown parent '" + *n.parent + "'"});
      continue;
    }
    parent_pairs.insert({*n.parent, n.id});
  }
  for (const auto& [p, c] : parent_pairs)
    if (!containment_edges.count({p, c}))
      out.push_back({"parent-edge-mismatch",
                     "node '" + c + "' has parent '" + p + "' but no containment edge"});
  for (const auto& [p, c] : containment_edges)
    if (!parent_pairs.count({p, c}))
      out.push_back({"parent-edge-mismatch", "containment edge " + p + " -> " + c +
                                                 " has no matching parent field"});

  // Parameter nodes live under methods (formals) or statements (actuals).
  for (const Node& n : nodes) {
    if (!is_parameter_kind(n.kind) || !n.parent) continue;
    auto p = graph.index_of(*n.parent);
    if (!p) continue;
    NodeKind pk = graph.node_at(*p).kind;
    bool formal = n.kind == NodeKind::FormalIn || n.kind == NodeKind::FormalOut;
    if (formal && pk != NodeKind::Method)
      out.push_back({"parameter-containment", "formal node '" + n.id +
                                                  "' is contained by a non-method node"});
    if (!formal && pk != NodeKind::Statement)
      out.push_back({"parameter-containment", "actual node '" + n.id +
                                                  "' is contained by a non-statement node"});
  }

  // Containment forest: at most one parent, no cycles, package roots.
  std::unordered_map<std::string, std::vector<std::string>> cont_parents;
  for (const auto& [p, c] : containment_edges) cont_parents[c].push_back(p);
  for (const auto& [c, ps] : cont_parents)
    if (ps.size() > 1)
      out.push_back({"containment-multi-parent",
                     "node '" + c + "' has " + std::to_string(ps.size()) +
                         " containment parents"});

  // Cycle check over the containment edge set.
  {
    std::unordered_map<std::string, std::vector<std::string>> down;
    for (const auto& [p, c] : containment_edges) down[p].push_back(c);
    std::unordered_map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::vector<std::pair<std::string, std::size_t>> stack;
    std::unordered_set<std::string> reported;
    for (const auto& [root, _] : down) {
      if (state[root]) continue;
      stack.push_back({root, 0});
      state[root] = 1;
      while (!stack.empty()) {
        auto& [id, next] = stack.back();
        auto it = down.find(id);
        if (it == down.end() || next >= it->second.size()) {
          state[id] = 2;
          stack.pop_back();
          continue;
        }
        const std::string& child = it->second[next++];
        if (state[child] == 1) {
          if (reported.insert(child).second)
            out.push_back({"containment-cycle",
                           "containment edges form a cycle through '" + child + "'"});
        } else if (state[child] == 0) {
          state[child] = 1;
          stack.push_back({child, 0});
        }
      }
    }
  }

  // Roots of the containment forest must be packages.
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const Node& n = graph.node_at(i);
    if (graph.parent_of(i)) continue;
    if (!graph.children_of(i).empty() && n.kind != NodeKind::Package)
      out.push_back({"containment-root-kind",
                     "containment root '" + n.id + "' is not a package node"});
  }

  return out;
}

ReachSet reach_from_set(const DependenceGraph& graph, std::span<const std::size_t> seeds,
                        Direction direction, const EdgeKindSet& excluded_kinds,
                        const std::vector<bool>* excluded_edges) {
  ReachSet r;
  r.visited.assign(graph.node_count(), false);
  r.edge_traversed.assign(graph.edges().size(), false);

  std::deque<std::size_t> work;
  for (std::size_t s : seeds) {
    if (!r.visited[s]) {
      r.visited[s] = true;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    std::size_t u = work.front();
    work.pop_front();
    auto arcs = direction == Direction::Forward ? graph.out_arcs(u) : graph.in_arcs(u);
    for (const auto& a : arcs) {
      const Edge& e = graph.edges()[a.edge];
      if (excluded_kinds.contains(e.kind)) continue;
      if (excluded_edges && (*excluded_edges)[a.edge]) continue;
      r.edge_traversed[a.edge] = true;
      if (!r.visited[a.neighbor]) {
        r.visited[a.neighbor] = true;
        work.push_back(a.neighbor);
      }
    }
  }
  return r;
}

std::vector<bool> mark_excluded_edges(const DependenceGraph& graph,
                                      std::span<const Edge> triples) {
  std::vector<bool> marked(graph.edges().size(), false);
  if (triples.empty()) return marked;
  std::set<std::tuple<std::string_view, std::string_view, EdgeKind>> wanted;
  for (const Edge& t : triples) wanted.insert({t.src, t.dst, t.kind});
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const Edge& ed = graph.edges()[e];
    if (wanted.count({ed.src, ed.dst, ed.kind})) marked[e] = true;
  }
  return marked;
}

ReachResult reachable(const DependenceGraph& graph, std::string_view start,
                      Direction direction, const EdgeFilter& filter) {
  std::size_t s = graph.require_index(start);
  std::vector<bool> excluded = mark_excluded_edges(graph, filter.excluded_edges);
  std::size_t seeds[1] = {s};
  ReachSet rs = reach_from_set(graph, seeds, direction, filter.excluded,
                               filter.excluded_edges.empty() ? nullptr : &excluded);
  ReachResult out;
  for (std::size_t i = 0; i < graph.node_count(); ++i)
    if (rs.visited[i]) out.nodes.push_back(graph.node_at(i).id);
  for (std::size_t e = 0; e < graph.edges().size(); ++e)
    if (rs.edge_traversed[e]) out.traversed.push_back(graph.edges()[e]);
  return out;
}

DependenceGraph induced_subgraph(const DependenceGraph& graph,
                                 std::span<const std::string> keep) {
  std::vector<bool> kept(graph.node_count(), false);
  for (const std::string& id : keep) kept[graph.require_index(id)] = true;

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (!kept[i]) continue;
    Node n = graph.node_at(i);
    if (n.parent) {
      auto p = graph.index_of(*n.parent);
      if (!p || !kept[*p]) n.parent.reset();
    }
    nodes.push_back(std::move(n));
  }
  std::vector<Edge> edges;
  for (const Edge& e : graph.edges()) {
    auto s = graph.index_of(e.src);
    auto d = graph.index_of(e.dst);
    if (s && d && kept[*s] && kept[*d]) edges.push_back(e);
  }
  return DependenceGraph(std::move(nodes), std::move(edges));
}

}  // namespace sliceprio
