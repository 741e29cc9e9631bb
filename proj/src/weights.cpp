#include "sliceprio/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "sliceprio/errors.hpp"

namespace sliceprio {

std::string_view to_string(Band band) {
  switch (band) {
    case Band::Weak: return "weak";
    case Band::Moderate: return "moderate";
    case Band::Critical: return "critical";
  }
  return "weak";
}

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::Threshold: return "threshold";
    case WeightMode::KMeans: return "kmeans";
    case WeightMode::Injected: return "injected";
  }
  return "threshold";
}

const NodeWeight* WeightMap::find(std::string_view id) const {
  for (const NodeWeight& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

namespace {

std::vector<double> initial_centroids(const std::vector<double>& sorted, int k,
                                      unsigned seed) {
  std::vector<double> distinct;
  distinct.reserve(sorted.size());
  for (double v : sorted)
    if (distinct.empty() || distinct.back() != v) distinct.push_back(v);

  if (static_cast<int>(distinct.size()) < k)
    throw ComputeError("k-means needs at least k distinct values (k=" + std::to_string(k) +
                       ", distinct=" + std::to_string(distinct.size()) + ")");

  if (seed != 0) {
    std::mt19937 rng(seed);
    std::vector<double> picked;
    std::sample(distinct.begin(), distinct.end(), std::back_inserter(picked),
                static_cast<std::size_t>(k), rng);
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  // Canonical start: mean of each k-quantile block of the sorted values.
  const std::size_t n = sorted.size();
  std::vector<double> cents;
  cents.reserve(k);
  for (int i = 0; i < k; ++i) {
    std::size_t lo = i * n / k;
    std::size_t hi = (i + 1) * n / k;
    double sum = 0.0;
    for (std::size_t j = lo; j < hi; ++j) sum += sorted[j];
    cents.push_back(sum / static_cast<double>(hi - lo));
  }
  // Blocks of identical values can collapse; fall back to an even spread
  // over the distinct values, which is always collision free.
  if (std::adjacent_find(cents.begin(), cents.end()) != cents.end()) {
    cents.clear();
    for (int i = 0; i < k; ++i)
      cents.push_back(distinct[(2 * i + 1) * distinct.size() / (2 * k)]);
  }
  return cents;
}

}  // namespace

KMeans1D kmeans_1d(std::span<const double> values, int k, unsigned seed) {
  if (values.empty()) throw ComputeError("k-means on an empty value list");
  if (k < 1) throw ComputeError("k-means needs k >= 1");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> centroids = initial_centroids(sorted, k, seed);

  const std::size_t n = sorted.size();
  std::vector<int> assign(n, -1);
  KMeans1D result;

  constexpr int kMaxIterations = 1000;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::vector<int> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::abs(sorted[i] - centroids[0]);
      for (int j = 1; j < k; ++j) {
        double d = std::abs(sorted[i] - centroids[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      next[i] = best;
    }
    double wcss = 0.0;
    std::vector<double> sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[next[i]] += sorted[i];
      ++count[next[i]];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double mean = sum[next[i]] / count[next[i]];
      wcss += (sorted[i] - mean) * (sorted[i] - mean);
    }
    result.wcss_history.push_back(wcss);
    result.iterations = iter + 1;
    if (next == assign) break;
    assign = std::move(next);
    for (int j = 0; j < k; ++j)
      if (count[j] > 0) centroids[j] = sum[j] / count[j];  // empty keeps its centroid
  }

  // Report centroids ascending and map the assignment back to input order.
  std::vector<int> order(k);
  for (int j = 0; j < k; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return centroids[a] < centroids[b]; });
  std::vector<int> rank(k);
  for (int j = 0; j < k; ++j) rank[order[j]] = j;

  result.centroids.resize(k);
  for (int j = 0; j < k; ++j) result.centroids[j] = centroids[order[j]];

  // Cluster of a value in input order = cluster of its sorted twin.
  std::vector<std::pair<double, int>> sorted_assign(n);
  for (std::size_t i = 0; i < n; ++i) sorted_assign[i] = {sorted[i], rank[assign[i]]};
  result.assignment.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = std::lower_bound(
        sorted_assign.begin(), sorted_assign.end(), values[i],
        [](const std::pair<double, int>& p, double v) { return p.first < v; });
    result.assignment[i] = it->second;
  }
  return result;
}

WeightMap assign_weights_threshold(const AccReport& acc) {
  WeightMap map;
  map.mode = WeightMode::Threshold;
  map.moderate_lower = 0.6;
  map.critical_lower = 0.7;
  for (const NodeAcc& n : acc.nodes) {
    double v = n.acc_updated;
    if (v < 0.0 || v > 1.0)
      throw ComputeError("coupling value " + std::to_string(v) + " of node '" + n.id +
                         "' is outside [0,1]");
    Band band = v >= 0.7 ? Band::Critical : (v >= 0.6 ? Band::Moderate : Band::Weak);
    map.nodes.push_back({n.id, v, static_cast<int>(band), band});
  }
  return map;
}

WeightMap assign_weights_kmeans(const AccReport& acc, unsigned seed) {
  std::vector<double> values;
  values.reserve(acc.nodes.size());
  for (const NodeAcc& n : acc.nodes) values.push_back(n.acc_updated);
  std::set<double> distinct(values.begin(), values.end());
  if (distinct.size() < 3)
    throw ComputeError("k-means weighting needs >= 3 distinct coupling values (got " +
                       std::to_string(distinct.size()) + "); use threshold mode");

  KMeans1D km = kmeans_1d(values, 3, seed);

  WeightMap map;
  map.mode = WeightMode::KMeans;
  std::vector<double> cluster_min(3, std::numeric_limits<double>::infinity());
  std::vector<double> cluster_max(3, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int c = km.assignment[i];
    cluster_min[c] = std::min(cluster_min[c], values[i]);
    cluster_max[c] = std::max(cluster_max[c], values[i]);
  }
  // Band boundaries are midpoints between adjacent clusters' extreme members,
  // skipping over empty clusters.
  auto boundary_above = [&](int c) -> std::optional<double> {
    int lo = c;
    while (lo >= 0 && cluster_min[lo] > cluster_max[lo]) --lo;
    int hi = c + 1;
    while (hi < 3 && cluster_min[hi] > cluster_max[hi]) ++hi;
    if (lo < 0 || hi > 2) return std::nullopt;
    return (cluster_max[lo] + cluster_min[hi]) / 2.0;
  };
  map.moderate_lower = boundary_above(0);
  map.critical_lower = boundary_above(1);

  for (std::size_t i = 0; i < acc.nodes.size(); ++i) {
    Band band = static_cast<Band>(km.assignment[i] + 1);
    map.nodes.push_back({acc.nodes[i].id, values[i], static_cast<int>(band), band});
  }
  return map;
}

WeightMap weight_map_from_injection(const DependenceGraph& asg,
                                    const std::map<std::string, int>& weights,
                                    std::vector<std::string>* warnings) {
  WeightMap map;
  map.mode = WeightMode::Injected;
  for (const Node& n : asg.nodes()) {
    auto it = weights.find(n.id);
    if (it == weights.end())
      throw DataError("injected weight map has no entry for node '" + n.id + "'");
    if (it->second < 1 || it->second > 3)
      throw DataError("injected weight for node '" + n.id + "' must be 1, 2, or 3");
    map.nodes.push_back({n.id, 0.0, it->second, static_cast<Band>(it->second)});
  }
  if (warnings) {
    for (const auto& [id, w] : weights)
      if (!asg.has_node(id))
        warnings->push_back("injected weight for '" + id + "' ignored: not an ASG node");
  }
  return map;
}

}  // namespace sliceprio
