#include "sliceprio/io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sliceprio {

namespace {

using nlohmann::json;

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Non-empty, non-comment lines of a delimited document.
std::vector<std::vector<std::string>> rows_of(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    auto toks = tokenize(line);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

}  // namespace

DependenceGraph parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("graph document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
    throw ParseError("graph document: top-level 'nodes' and 'edges' keys are required");

  std::vector<Node> nodes;
  for (const json& jn : doc["nodes"]) {
    if (!jn.is_object() || !jn.contains("id") || !jn.contains("kind"))
      throw ParseError("graph document: every node needs 'id' and 'kind'");
    Node n;
    n.id = jn["id"].get<std::string>();
    auto kind = node_kind_from_string(jn["kind"].get<std::string>());
    if (!kind)
      throw ParseError("graph document: unknown node kind '" +
                       jn["kind"].get<std::string>() + "' on node '" + n.id + "'");
    n.kind = *kind;
    if (jn.contains("label")) n.label = jn["label"].get<std::string>();
    if (jn.contains("parent") && !jn["parent"].is_null())
      n.parent = jn["parent"].get<std::string>();
    nodes.push_back(std::move(n));
  }

  std::vector<Edge> edges;
  for (const json& je : doc["edges"]) {
    if (!je.is_object() || !je.contains("src") || !je.contains("dst") || !je.contains("kind"))
      throw ParseError("graph document: every edge needs 'src', 'dst', and 'kind'");
    Edge e;
    e.src = je["src"].get<std::string>();
    e.dst = je["dst"].get<std::string>();
    auto kind = edge_kind_from_string(je["kind"].get<std::string>());
    if (!kind)
      throw ParseError("graph document: unknown edge kind '" +
                       je["kind"].get<std::string>() + "' on edge " + e.src + " -> " + e.dst);
    e.kind = *kind;
    edges.push_back(std::move(e));
  }
  return DependenceGraph(std::move(nodes), std::move(edges));
}

std::string serialize_graph_json(const DependenceGraph& graph) {
  json doc;
  doc["nodes"] = json::array();
  for (const Node& n : graph.nodes()) {
    json jn;
    jn["id"] = n.id;
    jn["kind"] = std::string(to_string(n.kind));
    if (!n.label.empty()) jn["label"] = n.label;
    if (n.parent) jn["parent"] = *n.parent;
    doc["nodes"].push_back(std::move(jn));
  }
  doc["edges"] = json::array();
  for (const Edge& e : graph.edges()) {
    doc["edges"].push_back(
        {{"src", e.src}, {"dst", e.dst}, {"kind", std::string(to_string(e.kind))}});
  }
  return doc.dump(2) + "\n";
}

std::vector<TestCase> parse_coverage(const std::string& text) {
  auto rows = rows_of(text);
  if (rows.empty()) throw DataError("coverage document has no test rows");
  std::vector<TestCase> suite;
  std::set<std::string> ids;
  for (const auto& row : rows) {
    TestCase t;
    t.id = row.front();
    if (!ids.insert(t.id).second)
      throw DataError("coverage document repeats test id '" + t.id + "'");
    t.covered.assign(row.begin() + 1, row.end());
    suite.push_back(std::move(t));
  }
  return suite;
}

std::string serialize_coverage(std::span<const TestCase> suite) {
  std::ostringstream out;
  for (const TestCase& t : suite) {
    out << t.id;
    for (const std::string& id : t.covered) out << ' ' << id;
    out << '\n';
  }
  return out.str();
}

FaultMatrix parse_faults(const std::string& text) {
  auto rows = rows_of(text);
  if (rows.size() < 2)
    throw ParseError("fault document needs a header row of test ids and fault rows");
  FaultMatrix m;
  m.tests = rows.front();
  std::set<std::string> col_ids(m.tests.begin(), m.tests.end());
  if (col_ids.size() != m.tests.size())
    throw DataError("fault document repeats a test id in the header");
  std::set<std::string> fault_ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != m.tests.size() + 1)
      throw ParseError("fault row '" + row.front() + "' has " +
                       std::to_string(row.size() - 1) + " marks, expected " +
                       std::to_string(m.tests.size()));
    if (!fault_ids.insert(row.front()).second)
      throw DataError("fault document repeats fault id '" + row.front() + "'");
    m.faults.push_back(row.front());
    std::vector<std::uint8_t> marks;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] != "0" && row[c] != "1")
        throw ParseError("fault row '" + row.front() + "': mark '" + row[c] +
                         "' is not 0 or 1");
      marks.push_back(row[c] == "1" ? 1 : 0);
    }
    m.detects.push_back(std::move(marks));
  }
  return m;
}

std::string serialize_faults(const FaultMatrix& faults) {
  std::ostringstream out;
  for (std::size_t t = 0; t < faults.tests.size(); ++t)
    out << (t ? " " : "") << faults.tests[t];
  out << '\n';
  for (std::size_t f = 0; f < faults.faults.size(); ++f) {
    out << faults.faults[f];
    for (std::uint8_t mark : faults.detects[f]) out << ' ' << int(mark);
    out << '\n';
  }
  return out.str();
}

std::map<std::string, int> parse_weight_injection(const std::string& text) {
  auto rows = rows_of(text);
  if (rows.empty()) throw DataError("weight document has no rows");
  std::map<std::string, int> weights;
  for (const auto& row : rows) {
    if (row.size() != 2)
      throw ParseError("weight row for '" + row.front() + "' needs exactly 'id weight'");
    if (row[1] != "1" && row[1] != "2" && row[1] != "3")
      throw ParseError("weight for '" + row.front() + "' must be 1, 2, or 3");
    if (!weights.emplace(row[0], row[1][0] - '0').second)
      throw DataError("weight document repeats node id '" + row[0] + "'");
  }
  return weights;
}

std::vector<std::string> parse_ordering_text(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& row : rows_of(text))
    for (const auto& tok : row) out.push_back(tok);
  if (out.empty()) throw DataError("ordering document names no tests");
  return out;
}

std::vector<std::string> parse_ordering_inline(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  if (out.empty()) throw DataError("ordering names no tests");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

}  // namespace sliceprio
