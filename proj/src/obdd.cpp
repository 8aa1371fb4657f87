#include "fmp/obdd.hpp"

#include "fmp/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fmp {

Obdd Obdd::parse_string(const std::string &text) {
  std::istringstream in(text);
  return parse(in);
}

Obdd Obdd::parse(std::istream &in) {
  auto lines = text::read_lines(in);
  if (lines.empty() || lines[0].tokens[0] != "obdd")
    throw ParseError(ParseIssue::BadHeader, lines.empty() ? 0 : lines[0].number,
                     "expected 'obdd <m> <node-count>'");
  text::expect_arity(lines[0], 3);
  const int m = text::to_int(lines[0].tokens[1], lines[0].number);
  const int declared = text::to_int(lines[0].tokens[2], lines[0].number);
  if (m < 1)
    throw ParseError(ParseIssue::BadHeader, lines[0].number, "feature count must be positive");

  std::vector<ObddNode> nodes;
  std::unordered_map<int, int> index_of_id;
  auto child = [&](const std::string &token, int line) {
    int id = text::to_int(token, line);
    auto it = index_of_id.find(id);
    if (it == index_of_id.end())
      throw ParseError(ParseIssue::ForwardReference, line,
                       "node " + std::to_string(id) + " is not declared before use");
    return it->second;
  };
  for (size_t l = 1; l < lines.size(); ++l) {
    const auto &line = lines[l];
    ObddNode node;
    if (line.tokens[0] == "N") {
      text::expect_arity(line, 5);
      node.id = text::to_int(line.tokens[1], line.number);
      node.var = text::to_int(line.tokens[2], line.number);
      if (node.var < 1 || node.var > m)
        throw ParseError(ParseIssue::BadFeature, line.number,
                         "feature " + line.tokens[2] + " outside 1.." + std::to_string(m));
      node.lo = child(line.tokens[3], line.number);
      node.hi = child(line.tokens[4], line.number);
    } else if (line.tokens[0] == "T") {
      text::expect_arity(line, 3);
      node.id = text::to_int(line.tokens[1], line.number);
      node.label = text::to_int(line.tokens[2], line.number);
    } else {
      throw ParseError(ParseIssue::Malformed, line.number,
                       "unknown line type '" + line.tokens[0] + "'");
    }
    if (!index_of_id.emplace(node.id, static_cast<int>(nodes.size())).second)
      throw ParseError(ParseIssue::DuplicateId, line.number,
                       "node id " + std::to_string(node.id));
    nodes.push_back(node);
  }
  if (static_cast<int>(nodes.size()) != declared)
    throw ParseError(ParseIssue::CountMismatch, lines[0].number,
                     "header declares " + std::to_string(declared) +
                         " nodes, file has " + std::to_string(nodes.size()));
  return from_nodes(m, std::move(nodes));
}

Obdd Obdd::from_nodes(int num_vars, std::vector<ObddNode> nodes) {
  if (nodes.empty())
    throw ParseError(ParseIssue::NoRoot, 0, "obdd has no nodes");
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const auto &node = nodes[i];
    if (node.is_terminal())
      continue;
    if (node.var < 1 || node.var > num_vars)
      throw ParseError(ParseIssue::BadFeature, 0, "feature outside 1..m");
    if (node.lo < 0 || node.lo >= i || node.hi < 0 || node.hi >= i)
      throw ParseError(ParseIssue::ForwardReference, 0,
                       "children must precede node " + std::to_string(node.id));
  }

  std::vector<char> live(n, 0);
  live[n - 1] = 1;
  for (int i = n - 1; i >= 0; --i)
    if (live[i] && !nodes[i].is_terminal())
      live[nodes[i].lo] = live[nodes[i].hi] = 1;
  std::vector<int> remap(n, -1);
  Obdd out;
  out.num_vars_ = num_vars;
  for (int i = 0; i < n; ++i) {
    if (!live[i])
      continue;
    remap[i] = out.size();
    ObddNode node = nodes[i];
    if (!node.is_terminal()) {
      node.lo = remap[node.lo];
      node.hi = remap[node.hi];
    }
    out.nodes_.push_back(node);
  }

  // Each feature at most once per path: track the features tested below.
  std::vector<std::vector<char>> below(out.size());
  for (int i = 0; i < out.size(); ++i) {
    const auto &node = out.nodes_[i];
    below[i].assign(num_vars + 1, 0);
    if (node.is_terminal())
      continue;
    for (int c : {node.lo, node.hi})
      for (int v = 1; v <= num_vars; ++v)
        below[i][v] = below[i][v] || below[c][v];
    if (below[i][node.var])
      throw ParseError(ParseIssue::Malformed, 0,
                       "feature " + std::to_string(node.var) +
                           " is tested twice on a path through node " +
                           std::to_string(node.id));
    below[i][node.var] = 1;
  }
  return out;
}

int Obdd::predict(std::span<const int> point) const {
  if (static_cast<int>(point.size()) != num_vars_)
    throw Error(ErrorCode::InvalidArgument, "point length differs from feature count");
  int v = root();
  while (!nodes_[v].is_terminal())
    v = point[nodes_[v].var - 1] ? nodes_[v].hi : nodes_[v].lo;
  return nodes_[v].label;
}

std::vector<int> Obdd::classes() const {
  std::set<int> labels;
  for (const auto &node : nodes_)
    if (node.is_terminal())
      labels.insert(node.label);
  return {labels.begin(), labels.end()};
}

std::string Obdd::serialize() const {
  std::ostringstream out;
  out << "obdd " << num_vars_ << ' ' << size() << '\n';
  for (const auto &node : nodes_) {
    if (node.is_terminal())
      out << "T " << node.id << ' ' << node.label << '\n';
    else
      out << "N " << node.id << ' ' << node.var << ' ' << nodes_[node.lo].id << ' '
          << nodes_[node.hi].id << '\n';
  }
  return out.str();
}

} // namespace fmp
