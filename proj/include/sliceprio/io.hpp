#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sliceprio/graph.hpp"
#include "sliceprio/prioritizer.hpp"

namespace sliceprio {

// GraphFile: JSON document with top-level "nodes" and "edges" arrays.
// Nodes carry {id, kind, label?, parent?}; edges carry {src, dst, kind}.
DependenceGraph parse_graph_json(const std::string& text);
std::string serialize_graph_json(const DependenceGraph& graph);

// CoverageFile: one whitespace-delimited row per test: the test id followed
// by the covered node ids. '#' starts a comment line.
std::vector<TestCase> parse_coverage(const std::string& text);
std::string serialize_coverage(std::span<const TestCase> suite);

// FaultFile: whitespace-delimited matrix. The header row lists the test ids;
// each following row is a fault id and one 0/1 mark per test.
FaultMatrix parse_faults(const std::string& text);
std::string serialize_faults(const FaultMatrix& faults);

// Weight injection: one "node-id weight" pair per row, weight in {1,2,3}.
std::map<std::string, int> parse_weight_injection(const std::string& text);

// Ordering: either whitespace/newline separated ids in a file, or an inline
// comma-separated list.
std::vector<std::string> parse_ordering_text(const std::string& text);
std::vector<std::string> parse_ordering_inline(const std::string& text);

std::string read_file(const std::string& path);          // ParseError when unreadable
void write_file(const std::string& path, const std::string& content);

}  // namespace sliceprio
