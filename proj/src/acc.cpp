#include "sliceprio/acc.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

namespace sliceprio {

namespace {

// Row-per-node reachability bitmap. Rows are computed over the SCC
// condensation in reverse topological order, so cycles cost nothing extra.
class ClosureMatrix {
public:
  ClosureMatrix(std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj)
      : n_(n), words_((n + 63) / 64) {
    tarjan(adj);
    std::size_t c = comp_count_;
    std::vector<std::vector<std::uint32_t>> comp_adj(c);
    for (std::size_t u = 0; u < n_; ++u)
      for (std::uint32_t v : adj[u])
        if (comp_[u] != comp_[v]) comp_adj[comp_[u]].push_back(comp_[v]);

    comp_rows_.assign(c * words_, 0);
    // Tarjan emits components in reverse topological order: successors first.
    for (std::size_t u = 0; u < n_; ++u) set_bit(comp_rows_, comp_[u], u);
    for (std::size_t comp = 0; comp < c; ++comp)
      for (std::uint32_t succ : comp_adj[comp])
        or_row(comp_rows_, comp, succ);
  }

  bool reaches(std::size_t u, std::size_t v) const {
    return (row(u)[v / 64] >> (v % 64)) & 1u;
  }

  const std::uint64_t* row(std::size_t u) const { return &comp_rows_[comp_[u] * words_]; }
  std::size_t words() const { return words_; }

  // Number of nodes reachable from u, u itself excluded.
  int count_from(std::size_t u) const {
    const std::uint64_t* r = row(u);
    int total = 0;
    for (std::size_t w = 0; w < words_; ++w) total += std::popcount(r[w]);
    return total - 1;  // every node sits in its own component row
  }

private:
  void set_bit(std::vector<std::uint64_t>& rows, std::size_t row, std::size_t bit) {
    rows[row * words_ + bit / 64] |= std::uint64_t(1) << (bit % 64);
  }
  void or_row(std::vector<std::uint64_t>& rows, std::size_t dst, std::size_t src) {
    std::uint64_t* d = &rows[dst * words_];
    const std::uint64_t* s = &rows[src * words_];
    for (std::size_t w = 0; w < words_; ++w) d[w] |= s[w];
  }

  void tarjan(const std::vector<std::vector<std::uint32_t>>& adj) {
    comp_.assign(n_, UINT32_MAX);
    std::vector<std::uint32_t> low(n_, 0), num(n_, 0);
    std::vector<bool> on_stack(n_, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t counter = 1;
    comp_count_ = 0;

    struct Frame {
      std::uint32_t node;
      std::size_t next;
    };
    std::vector<Frame> frames;
    for (std::uint32_t root = 0; root < n_; ++root) {
      if (num[root]) continue;
      frames.push_back({root, 0});
      num[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.next < adj[f.node].size()) {
          std::uint32_t w = adj[f.node][f.next++];
          if (!num[w]) {
            num[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = true;
            frames.push_back({w, 0});
          } else if (on_stack[w]) {
            low[f.node] = std::min(low[f.node], num[w]);
          }
        } else {
          std::uint32_t v = f.node;
          frames.pop_back();
          if (!frames.empty())
            low[frames.back().node] = std::min(low[frames.back().node], low[v]);
          if (low[v] == num[v]) {
            while (true) {
              std::uint32_t w = stack.back();
              stack.pop_back();
              on_stack[w] = false;
              comp_[w] = static_cast<std::uint32_t>(comp_count_);
              if (w == v) break;
            }
            ++comp_count_;
          }
        }
      }
    }
  }

  std::size_t n_;
  std::size_t words_;
  std::size_t comp_count_ = 0;
  std::vector<std::uint32_t> comp_;
  std::vector<std::uint64_t> comp_rows_;
};

std::vector<std::vector<std::uint32_t>> adjacency(const DependenceGraph& g, bool reversed) {
  std::vector<std::vector<std::uint32_t>> adj(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    auto arcs = reversed ? g.in_arcs(u) : g.out_arcs(u);
    for (const auto& a : arcs) adj[u].push_back(a.neighbor);
  }
  return adj;
}

std::vector<std::string> flow_set(const DependenceGraph& asg, std::string_view node,
                                  Direction direction) {
  std::size_t start = asg.require_index(node);
  std::size_t seeds[1] = {start};
  ReachSet r = reach_from_set(asg, seeds, direction, {});
  std::vector<std::string> out;
  for (std::size_t i = 0; i < asg.node_count(); ++i)
    if (r.visited[i] && i != start) out.push_back(asg.node_at(i).id);
  return out;
}

}  // namespace

const NodeAcc* AccReport::find(std::string_view id) const {
  for (const NodeAcc& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<std::string> inflow(const DependenceGraph& asg, std::string_view node) {
  return flow_set(asg, node, Direction::Backward);
}

std::vector<std::string> outflow(const DependenceGraph& asg, std::string_view node) {
  return flow_set(asg, node, Direction::Forward);
}

double acc_raw(const DependenceGraph& asg, std::string_view node) {
  if (asg.node_count() < 2)
    throw ComputeError("coupling is undefined on a graph with fewer than 2 nodes");
  std::size_t i = asg.require_index(node);
  std::vector<bool> in_psi(asg.node_count(), false);
  for (const std::string& id : inflow(asg, node)) in_psi[asg.require_index(id)] = true;
  for (const std::string& id : outflow(asg, node)) in_psi[asg.require_index(id)] = true;
  in_psi[i] = false;
  int psi = static_cast<int>(std::count(in_psi.begin(), in_psi.end(), true));
  return static_cast<double>(psi) / static_cast<double>(asg.node_count() - 1);
}

AccReport compute_raw_acc(const DependenceGraph& asg) {
  const std::size_t n = asg.node_count();
  if (n < 2)
    throw ComputeError("coupling is undefined on a graph with fewer than 2 nodes");

  ClosureMatrix fwd(n, adjacency(asg, false));
  ClosureMatrix bwd(n, adjacency(asg, true));

  AccReport report;
  report.nodes.resize(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    NodeAcc& a = report.nodes[i];
    a.id = asg.node_at(i).id;
    a.outflow_size = fwd.count_from(i);
    a.inflow_size = bwd.count_from(i);
    // ψ as one union over the two closure rows; self is in both and counts once.
    const std::uint64_t* rf = fwd.row(i);
    const std::uint64_t* rb = bwd.row(i);
    int uni = 0;
    for (std::size_t w = 0; w < fwd.words(); ++w) uni += std::popcount(rf[w] | rb[w]);
    a.psi_size = uni - 1;
    a.acc_raw = static_cast<double>(a.psi_size) / denom;
    a.acc_updated = a.acc_raw;
  }
  return report;
}

AccReport rollup(const DependenceGraph& asg, const AccReport& raw) {
  std::unordered_map<std::string_view, const NodeAcc*> by_id;
  by_id.reserve(raw.nodes.size());
  for (const NodeAcc& a : raw.nodes) by_id.emplace(a.id, &a);

  const std::size_t n = asg.node_count();
  AccReport out;
  out.nodes.resize(n);
  out.slice_acc = raw.slice_acc;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = by_id.find(asg.node_at(i).id);
    if (it == by_id.end())
      throw DataError("rollup: no coupling value for node '" + asg.node_at(i).id + "'");
    out.nodes[i] = *it->second;
    out.nodes[i].acc_updated = out.nodes[i].acc_raw;
  }

  auto average_members = [&](std::size_t u, std::initializer_list<NodeKind> member_kinds,
                             bool use_updated) {
    double sum = out.nodes[u].acc_raw;
    int count = 0;
    for (std::uint32_t c : asg.children_of(u)) {
      NodeKind k = asg.node_at(c).kind;
      if (std::find(member_kinds.begin(), member_kinds.end(), k) == member_kinds.end())
        continue;
      sum += use_updated ? out.nodes[c].acc_updated : out.nodes[c].acc_raw;
      ++count;
    }
    if (count > 0) out.nodes[u].acc_updated = sum / (count + 1);
  };

  // Methods first: members are formal parameter nodes and statements.
  for (std::size_t i = 0; i < n; ++i)
    if (asg.node_at(i).kind == NodeKind::Method)
      average_members(i, {NodeKind::FormalIn, NodeKind::FormalOut, NodeKind::Statement},
                      false);

  // Classes next, consuming the methods' updated values.
  for (std::size_t i = 0; i < n; ++i)
    if (asg.node_at(i).kind == NodeKind::Class)
      average_members(i, {NodeKind::Attribute, NodeKind::Method}, true);

  // Packages last, deepest first so subpackages are already updated.
  std::vector<std::size_t> packages;
  for (std::size_t i = 0; i < n; ++i)
    if (asg.node_at(i).kind == NodeKind::Package) packages.push_back(i);
  auto depth = [&](std::size_t i) {
    int d = 0;
    for (auto p = asg.parent_of(i); p; p = asg.parent_of(*p)) {
      if (++d > static_cast<int>(n)) throw DataError("containment cycle detected");
    }
    return d;
  };
  std::stable_sort(packages.begin(), packages.end(),
                   [&](std::size_t a, std::size_t b) { return depth(a) > depth(b); });
  for (std::size_t i : packages)
    average_members(i, {NodeKind::Class, NodeKind::Package}, true);

  return out;
}

double slice_acc(const AccReport& report) {
  if (report.nodes.empty()) throw ComputeError("slice coupling of an empty report");
  double sum = 0.0;
  for (const NodeAcc& a : report.nodes) sum += a.acc_updated;
  return sum / static_cast<double>(report.nodes.size());
}

}  // namespace sliceprio
