#include "sliceprio/prioritizer.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "sliceprio/errors.hpp"

namespace sliceprio {

bool FaultMatrix::detected_by(std::size_t fault, std::string_view test) const {
  for (std::size_t t = 0; t < tests.size(); ++t)
    if (tests[t] == test) return detects[fault][t] != 0;
  return false;
}

bool FaultMatrix::has_test(std::string_view test) const {
  return std::find(tests.begin(), tests.end(), test) != tests.end();
}

TestWeights test_weights(const TestCase& test, const WeightMap& weights,
                         std::vector<std::string>* warnings) {
  std::unordered_map<std::string_view, int> weight_of;
  weight_of.reserve(weights.nodes.size());
  for (const NodeWeight& n : weights.nodes) weight_of.emplace(n.id, n.weight);

  std::unordered_set<std::string_view> seen;
  TestWeights w;
  for (const std::string& id : test.covered) {
    if (!seen.insert(id).second) continue;
    auto it = weight_of.find(id);
    if (it == weight_of.end()) {
      if (warnings)
        warnings->push_back("test '" + test.id + "' covers '" + id +
                            "', which is not an affected node (ignored)");
      continue;
    }
    switch (it->second) {
      case 3: w.wtc += 3; break;
      case 2: w.wtm += 2; break;
      default: w.wtw += 1; break;
    }
  }
  w.wt = w.wtc + w.wtm + w.wtw;
  return w;
}

PrioritizedSuite prioritize(std::span<const TestCase> suite, const WeightMap& weights,
                            std::vector<std::string>* warnings) {
  if (suite.empty()) throw ComputeError("cannot prioritize an empty test suite");

  std::vector<RankedTest> ranked;
  ranked.reserve(suite.size());
  for (const TestCase& t : suite) ranked.push_back({t.id, test_weights(t, weights, warnings)});

  auto key = [](const RankedTest& t) {
    return std::make_tuple(t.weights.wt, t.weights.wtc, t.weights.wtm, t.weights.wtw);
  };
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](const RankedTest& a, const RankedTest& b) { return key(a) > key(b); });

  PrioritizedSuite out;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    ranked[i].rank = static_cast<int>(i) + 1;
    out.tests.push_back(ranked[i]);
  }
  for (std::size_t i = 0; i < ranked.size();) {
    std::size_t j = i + 1;
    while (j < ranked.size() && ranked[j].weights == ranked[i].weights) ++j;
    if (j - i > 1) {
      std::vector<std::string> group;
      for (std::size_t k = i; k < j; ++k) group.push_back(ranked[k].id);
      out.tie_groups.push_back(std::move(group));
    }
    i = j;
  }
  return out;
}

std::vector<std::string> AncResult::order() const {
  std::vector<std::string> out;
  out.reserve(picks.size());
  for (const AncPick& p : picks) out.push_back(p.id);
  return out;
}

AncResult anc_prioritize(std::span<const TestCase> suite,
                         std::span<const std::string> affected, AncDecay decay) {
  if (suite.empty()) throw ComputeError("cannot prioritize an empty test suite");

  std::unordered_map<std::string_view, double> node_weight;
  node_weight.reserve(affected.size());
  for (const std::string& id : affected) node_weight.emplace(id, 1.0);

  // Covered affected node sets, deduplicated per test.
  std::vector<std::vector<std::string_view>> covered(suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) {
    std::unordered_set<std::string_view> seen;
    for (const std::string& id : suite[i].covered)
      if (node_weight.count(id) && seen.insert(id).second) covered[i].push_back(id);
  }

  AncResult result;
  std::vector<bool> scheduled(suite.size(), false);
  for (std::size_t round = 0; round < suite.size(); ++round) {
    std::size_t best = suite.size();
    double best_score = -1.0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      if (scheduled[i]) continue;
      double score = 0.0;
      for (std::string_view id : covered[i]) score += node_weight[id];
      if (score > best_score) {  // ties keep the earlier input position
        best_score = score;
        best = i;
      }
    }
    scheduled[best] = true;
    result.picks.push_back({suite[best].id, best_score});
    for (std::string_view id : covered[best]) {
      double& w = node_weight[id];
      w = decay == AncDecay::Halve ? w * 0.5 : std::max(0.0, w - 0.5);
    }
  }
  return result;
}

namespace {

// F_i for every fault, or n+1 for undetected ones when permissive.
std::vector<std::size_t> first_detection_positions(std::span<const std::string> ordering,
                                                  const FaultMatrix& faults,
                                                  bool permissive) {
  std::unordered_set<std::string_view> seen_ids;
  for (const std::string& id : ordering) {
    if (!faults.has_test(id))
      throw DataError("ordering names test '" + id + "', which the fault matrix lacks");
    if (!seen_ids.insert(id).second)
      throw DataError("ordering repeats test '" + id + "'");
  }
  std::vector<std::size_t> positions;
  positions.reserve(faults.faults.size());
  for (std::size_t f = 0; f < faults.faults.size(); ++f) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < ordering.size(); ++i) {
      if (faults.detected_by(f, ordering[i])) {
        pos = i + 1;
        break;
      }
    }
    if (pos == 0) {
      if (!permissive)
        throw ComputeError("fault '" + faults.faults[f] +
                           "' is not detected by any test in the ordering");
      pos = ordering.size() + 1;
    }
    positions.push_back(pos);
  }
  return positions;
}

}  // namespace

double apfd(std::span<const std::string> ordering, const FaultMatrix& faults,
            bool permissive) {
  if (ordering.empty()) throw ComputeError("apfd of an empty ordering");
  if (faults.faults.empty()) throw ComputeError("apfd with no faults");
  auto positions = first_detection_positions(ordering, faults, permissive);
  double sum = 0.0;
  for (std::size_t p : positions) sum += static_cast<double>(p);
  const double n = static_cast<double>(ordering.size());
  const double l = static_cast<double>(faults.faults.size());
  return 1.0 - sum / (n * l) + 1.0 / (2.0 * n);
}

std::vector<double> percent_detected_curve(std::span<const std::string> ordering,
                                           const FaultMatrix& faults, bool permissive) {
  if (ordering.empty()) return {};  // no tests executed, empty curve
  auto positions = first_detection_positions(ordering, faults, permissive);
  std::vector<double> curve(ordering.size(), 0.0);
  const double l = static_cast<double>(faults.faults.size());
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    int detected = 0;
    for (std::size_t p : positions)
      if (p <= j + 1) ++detected;
    curve[j] = 100.0 * static_cast<double>(detected) / l;
  }
  return curve;
}

}  // namespace sliceprio
