#include "fmp/decision_tree.hpp"

#include "fmp/error.hpp"
#include "text.hpp"

#include <set>
#include <sstream>
#include <unordered_map>

namespace fmp {

DecisionTree DecisionTree::parse_string(const std::string &text) {
  std::istringstream in(text);
  return parse(in);
}

DecisionTree DecisionTree::parse(std::istream &in) {
  auto lines = text::read_lines(in);
  if (lines.empty() || lines[0].tokens[0] != "dt")
    throw ParseError(ParseIssue::BadHeader, lines.empty() ? 0 : lines[0].number,
                     "expected 'dt <m>'");
  text::expect_arity(lines[0], 2);
  const int m = text::to_int(lines[0].tokens[1], lines[0].number);
  if (m < 1)
    throw ParseError(ParseIssue::BadHeader, lines[0].number, "feature count must be positive");

  DecisionTree dt;
  dt.domains_.assign(m, {"0", "1"});
  std::vector<char> has_domain(m, 0);
  std::unordered_map<int, int> index_of_id;
  struct RawEdge {
    int from, to;
    std::vector<std::string> values;
    int line;
  };
  std::vector<RawEdge> raw_edges;
  auto feature = [&](const std::string &token, int line) {
    int f = text::to_int(token, line);
    if (f < 1 || f > m)
      throw ParseError(ParseIssue::BadFeature, line,
                       "feature " + token + " outside 1.." + std::to_string(m));
    return f;
  };

  for (size_t l = 1; l < lines.size(); ++l) {
    const auto &line = lines[l];
    const auto &kind = line.tokens[0];
    if (kind == "DOM") {
      text::expect_min_arity(line, 4);
      int f = feature(line.tokens[1], line.number);
      int k = text::to_int(line.tokens[2], line.number);
      if (k < 1)
        throw ParseError(ParseIssue::Malformed, line.number, "empty domain");
      text::expect_arity(line, 3 + static_cast<size_t>(k));
      if (has_domain[f - 1])
        throw ParseError(ParseIssue::Malformed, line.number,
                         "second domain for feature " + std::to_string(f));
      has_domain[f - 1] = 1;
      std::vector<std::string> values(line.tokens.begin() + 3, line.tokens.end());
      if (std::set<std::string>(values.begin(), values.end()).size() != values.size())
        throw ParseError(ParseIssue::BadValue, line.number, "repeated domain value");
      dt.domains_[f - 1] = std::move(values);
    } else if (kind == "N" || kind == "T") {
      text::expect_arity(line, 3);
      DtNode node;
      node.id = text::to_int(line.tokens[1], line.number);
      if (kind == "N")
        node.var = feature(line.tokens[2], line.number);
      else
        node.label = text::to_int(line.tokens[2], line.number);
      if (!index_of_id.emplace(node.id, dt.size()).second)
        throw ParseError(ParseIssue::DuplicateId, line.number,
                         "node id " + std::to_string(node.id));
      dt.nodes_.push_back(std::move(node));
    } else if (kind == "E") {
      text::expect_min_arity(line, 4);
      raw_edges.push_back({text::to_int(line.tokens[1], line.number),
                           text::to_int(line.tokens[2], line.number),
                           {line.tokens.begin() + 3, line.tokens.end()},
                           line.number});
    } else {
      throw ParseError(ParseIssue::Malformed, line.number,
                       "unknown line type '" + kind + "'");
    }
  }
  if (dt.nodes_.empty())
    throw ParseError(ParseIssue::NoRoot, 0, "decision tree has no nodes");

  std::vector<int> indegree(dt.size(), 0);
  for (const auto &re : raw_edges) {
    auto from = index_of_id.find(re.from);
    auto to = index_of_id.find(re.to);
    if (from == index_of_id.end() || to == index_of_id.end())
      throw ParseError(ParseIssue::DanglingReference, re.line,
                       "edge endpoint " +
                           std::to_string(from == index_of_id.end() ? re.from : re.to) +
                           " is not declared");
    auto &src = dt.nodes_[from->second];
    if (src.is_leaf())
      throw ParseError(ParseIssue::Malformed, re.line, "edge leaves a terminal node");
    DtEdge edge{to->second, {}};
    for (const auto &token : re.values) {
      const auto &dom = dt.domains_[src.var - 1];
      int idx = -1;
      for (size_t i = 0; i < dom.size(); ++i)
        if (dom[i] == token)
          idx = static_cast<int>(i);
      if (idx < 0)
        throw ParseError(ParseIssue::BadValue, re.line,
                         "value '" + token + "' not in the domain of feature " +
                             std::to_string(src.var));
      edge.values.push_back(idx);
    }
    src.edges.push_back(std::move(edge));
    if (++indegree[to->second] > 1)
      throw ParseError(ParseIssue::NotATree, re.line,
                       "node " + std::to_string(re.to) + " has several parents");
  }

  for (int i = 0; i < dt.size(); ++i) {
    const auto &node = dt.nodes_[i];
    if (indegree[i] == 0) {
      if (dt.root_ >= 0)
        throw ParseError(ParseIssue::MultipleRoots, 0,
                         "nodes " + std::to_string(dt.nodes_[dt.root_].id) + " and " +
                             std::to_string(node.id) + " have no parent");
      dt.root_ = i;
    }
    if (node.is_leaf())
      continue;
    if (node.edges.empty())
      throw ParseError(ParseIssue::MissingOutEdge, 0,
                       "node " + std::to_string(node.id) + " has no edges");
    std::vector<int> hits(dt.domains_[node.var - 1].size(), 0);
    for (const auto &e : node.edges)
      for (int v : e.values)
        ++hits[v];
    for (int h : hits)
      if (h != 1)
        throw ParseError(ParseIssue::NotAPartition, 0,
                         "edges of node " + std::to_string(node.id) +
                             " do not partition the domain of feature " +
                             std::to_string(node.var));
  }
  if (dt.root_ < 0)
    throw ParseError(ParseIssue::Cycle, 0, "decision tree has no root");
  int reached = 0;
  std::vector<int> stack{dt.root_};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++reached;
    for (const auto &e : dt.nodes_[v].edges)
      stack.push_back(e.to);
  }
  if (reached != dt.size())
    throw ParseError(ParseIssue::Cycle, 0, "nodes unreachable from the root");
  return dt;
}

int DecisionTree::value_index(int var, const std::string &token) const {
  const auto &dom = domain(var);
  for (size_t i = 0; i < dom.size(); ++i)
    if (dom[i] == token)
      return static_cast<int>(i);
  throw ParseError(ParseIssue::BadValue, 0,
                   "value '" + token + "' not in the domain of feature " +
                       std::to_string(var));
}

Instance DecisionTree::bind(const InstanceRecord &record) const {
  if (static_cast<int>(record.values.size()) != num_vars())
    throw Error(ErrorCode::InvalidArgument,
                "instance has " + std::to_string(record.values.size()) +
                    " values, classifier has " + std::to_string(num_vars()) +
                    " features");
  Instance inst;
  for (int f = 1; f <= num_vars(); ++f)
    inst.point.push_back(value_index(f, record.values[f - 1]));
  inst.prediction = text::to_int(record.prediction, 0);
  return inst;
}

int DecisionTree::predict(std::span<const int> point) const {
  if (static_cast<int>(point.size()) != num_vars())
    throw Error(ErrorCode::InvalidArgument, "point length differs from feature count");
  int v = root_;
  while (!nodes_[v].is_leaf()) {
    const auto &node = nodes_[v];
    int x = point[node.var - 1];
    int next = -1;
    for (const auto &e : node.edges)
      for (int value : e.values)
        if (value == x)
          next = e.to;
    if (next < 0)
      throw Error(ErrorCode::InvalidArgument, "value outside the feature domain");
    v = next;
  }
  return nodes_[v].label;
}

std::vector<int> DecisionTree::reachable_classes() const {
  std::set<int> labels;
  // Per-feature admissible values along the current path.
  std::vector<std::vector<char>> allowed;
  for (const auto &dom : domains_)
    allowed.emplace_back(dom.size(), 1);
  auto walk = [&](auto &&self, int v) -> void {
    const auto &node = nodes_[v];
    if (node.is_leaf()) {
      labels.insert(node.label);
      return;
    }
    auto &slot = allowed[node.var - 1];
    for (const auto &e : node.edges) {
      auto saved = slot;
      std::vector<char> next(slot.size(), 0);
      bool any = false;
      for (int value : e.values)
        if (slot[value]) {
          next[value] = 1;
          any = true;
        }
      if (!any)
        continue;
      slot = std::move(next);
      self(self, e.to);
      slot = std::move(saved);
    }
  };
  walk(walk, root_);
  return {labels.begin(), labels.end()};
}

} // namespace fmp
