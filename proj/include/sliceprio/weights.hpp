#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sliceprio/acc.hpp"

namespace sliceprio {

enum class Band : int { Weak = 1, Moderate = 2, Critical = 3 };

enum class WeightMode { Threshold, KMeans, Injected };

std::string_view to_string(Band band);
std::string_view to_string(WeightMode mode);

struct NodeWeight {
  std::string id;
  double acc = 0.0;
  int weight = 1;  // 1, 2, or 3; always equal to the band rank
  Band band = Band::Weak;
};

struct WeightMap {
  std::vector<NodeWeight> nodes;
  WeightMode mode = WeightMode::Threshold;
  // Lower edges of the moderate and critical bands; absent for injected maps.
  std::optional<double> moderate_lower;
  std::optional<double> critical_lower;

  const NodeWeight* find(std::string_view id) const;
};

struct KMeans1D {
  std::vector<double> centroids;      // ascending
  std::vector<int> assignment;        // per input value, index into centroids
  std::vector<double> wcss_history;   // objective after each assignment step
  int iterations = 0;
};

// Lloyd's iteration to a fixed point. seed 0 selects the canonical
// deterministic start (the mean of each k-quantile block of the sorted
// values); any other seed draws k distinct values pseudorandomly. Both are
// invariant under permutation of the input.
KMeans1D kmeans_1d(std::span<const double> values, int k, unsigned seed = 0);

// Fixed bands: weight 3 for acc >= 0.7, weight 2 for 0.6 <= acc < 0.7,
// weight 1 otherwise. Uses the updated coupling values.
WeightMap assign_weights_threshold(const AccReport& acc);

// Three k-means clusters of the updated coupling values; the cluster with
// the highest centroid is the critical band. Requires >= 3 distinct values.
WeightMap assign_weights_kmeans(const AccReport& acc, unsigned seed = 0);

// Weight map supplied directly (one weight per ASG node). Entries for ids
// outside the ASG produce warnings; ASG nodes without an entry are an error.
WeightMap weight_map_from_injection(const DependenceGraph& asg,
                                    const std::map<std::string, int>& weights,
                                    std::vector<std::string>* warnings = nullptr);

}  // namespace sliceprio
