#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sliceprio/weights.hpp"

namespace sliceprio {

struct TestCase {
  std::string id;
  std::vector<std::string> covered;  // ASG node ids; duplicates collapse
};

struct TestWeights {
  int wtc = 0;  // 3 x covered critical nodes
  int wtm = 0;  // 2 x covered moderate nodes
  int wtw = 0;  // 1 x covered weak nodes
  int wt = 0;   // wtc + wtm + wtw

  friend bool operator==(const TestWeights&, const TestWeights&) = default;
};

struct RankedTest {
  std::string id;
  TestWeights weights;
  int rank = 0;  // 1-based position in the prioritized sequence
};

struct PrioritizedSuite {
  std::vector<RankedTest> tests;  // descending by (wt, wtc, wtm, wtw)
  // Groups of tests whose four weights are all identical; they keep their
  // input order and share equal priority.
  std::vector<std::vector<std::string>> tie_groups;
};

struct FaultMatrix {
  std::vector<std::string> tests;
  std::vector<std::string> faults;
  std::vector<std::vector<std::uint8_t>> detects;  // [fault][test] in {0,1}

  bool detected_by(std::size_t fault, std::string_view test) const;
  bool has_test(std::string_view test) const;
};

// Per-test weight from the covered nodes' bands. Covered ids absent from the
// weight map are skipped with a warning.
TestWeights test_weights(const TestCase& test, const WeightMap& weights,
                         std::vector<std::string>* warnings = nullptr);

// Stable descending sort on (wt, wtc, wtm, wtw); full ties keep input order
// and are reported as tie groups.
PrioritizedSuite prioritize(std::span<const TestCase> suite, const WeightMap& weights,
                            std::vector<std::string>* warnings = nullptr);

enum class AncDecay {
  Halve,     // node weight is multiplied by 0.5 once covered
  Subtract,  // node weight drops by 0.5, clamped at zero
};

struct AncPick {
  std::string id;
  double score = 0.0;  // sum of remaining node weights at pick time
};

struct AncResult {
  std::vector<AncPick> picks;
  std::vector<std::string> order() const;
};

// Affected-node-coverage baseline: every affected node starts at weight 1.0;
// the greedy loop repeatedly takes the test with the largest remaining
// coverage weight (ties resolved by input order) and decays covered nodes.
AncResult anc_prioritize(std::span<const TestCase> suite,
                         std::span<const std::string> affected,
                         AncDecay decay = AncDecay::Halve);

// Average percentage of faults detected: 1 - sum(F_i)/(n*l) + 1/(2n), where
// F_i is the first position detecting fault i. A fault no test in the
// ordering detects is an error unless permissive, which uses F_i = n + 1.
double apfd(std::span<const std::string> ordering, const FaultMatrix& faults,
            bool permissive = false);

// Entry j: percentage of faults detected by the first j tests.
std::vector<double> percent_detected_curve(std::span<const std::string> ordering,
                                           const FaultMatrix& faults,
                                           bool permissive = false);

}  // namespace sliceprio
