#include "fmp/xpg.hpp"

#include "fmp/error.hpp"
#include "text.hpp"

#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fmp {

XpGraph XpGraph::from_parts(int num_features, std::vector<XpgNode> nodes,
                            std::vector<XpgEdge> edges) {
  XpGraph g;
  g.num_features_ = num_features;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  const int n = g.size();
  if (num_features < 1)
    throw ParseError(ParseIssue::BadHeader, 0, "feature count must be positive");
  if (n == 0)
    throw ParseError(ParseIssue::NoRoot, 0, "graph has no nodes");

  std::unordered_set<int> ids;
  for (const auto &node : g.nodes_) {
    if (!ids.insert(node.id).second)
      throw ParseError(ParseIssue::DuplicateId, 0, "node id " + std::to_string(node.id));
    if (node.is_terminal() && node.label != 0 && node.label != 1)
      throw ParseError(ParseIssue::BadValue, 0, "terminal labels must be 0 or 1");
    if (node.var < 0 || node.var > num_features)
      throw ParseError(ParseIssue::BadFeature, 0,
                       "feature " + std::to_string(node.var) + " outside 1.." +
                           std::to_string(num_features));
  }

  g.in_.assign(n, {});
  g.out_.assign(n, {});
  for (int e = 0; e < static_cast<int>(g.edges_.size()); ++e) {
    const auto &edge = g.edges_[e];
    if (edge.from < 0 || edge.from >= n || edge.to < 0 || edge.to >= n)
      throw ParseError(ParseIssue::DanglingReference, 0, "edge endpoint out of range");
    g.out_[edge.from].push_back(e);
    g.in_[edge.to].push_back(e);
  }

  for (int i = 0; i < n; ++i) {
    const auto &node = g.nodes_[i];
    if (node.is_terminal()) {
      if (!g.out_[i].empty())
        throw ParseError(ParseIssue::Malformed, 0,
                         "terminal " + std::to_string(node.id) + " has out-edges");
      continue;
    }
    if (g.out_[i].empty())
      throw ParseError(ParseIssue::MissingOutEdge, 0,
                       "node " + std::to_string(node.id) + " has no out-edges");
    int ones = 0;
    for (int e : g.out_[i])
      ones += g.edges_[e].label;
    if (ones > 1)
      throw ParseError(ParseIssue::MultipleOneEdges, 0,
                       "node " + std::to_string(node.id) + " has " +
                           std::to_string(ones) + " out-edges labelled 1");
  }

  for (int i = 0; i < n; ++i) {
    if (!g.in_[i].empty())
      continue;
    if (g.root_ >= 0)
      throw ParseError(ParseIssue::MultipleRoots, 0,
                       "multiple roots: nodes " + std::to_string(g.nodes_[g.root_].id) +
                           " and " + std::to_string(g.nodes_[i].id) +
                           " have indegree 0");
    g.root_ = i;
  }
  if (g.root_ < 0)
    throw ParseError(ParseIssue::Cycle, 0, "no node has indegree 0");

  std::vector<int> pending(n);
  for (int i = 0; i < n; ++i)
    pending[i] = static_cast<int>(g.in_[i].size());
  g.topo_.push_back(g.root_);
  for (size_t head = 0; head < g.topo_.size(); ++head)
    for (int e : g.out_[g.topo_[head]])
      if (--pending[g.edges_[e].to] == 0)
        g.topo_.push_back(g.edges_[e].to);
  if (static_cast<int>(g.topo_.size()) != n)
    throw ParseError(ParseIssue::Cycle, 0, "graph contains a cycle");

  // Follow the unique all-1 path from the root.
  int v = g.root_;
  while (!g.nodes_[v].is_terminal()) {
    int next = -1;
    for (int e : g.out_[v])
      if (g.edges_[e].label)
        next = g.edges_[e].to;
    if (next < 0)
      throw ParseError(ParseIssue::NoOneTerminal, 0,
                       "no reachable 1-terminal: the all-1 path stops at node " +
                           std::to_string(g.nodes_[v].id));
    v = next;
  }
  if (g.nodes_[v].label != 1)
    throw ParseError(ParseIssue::NoOneTerminal, 0,
                     "no reachable 1-terminal: the all-1 path ends at a 0-terminal");
  return g;
}

XpGraph XpGraph::parse_string(const std::string &text) {
  std::istringstream in(text);
  return parse(in);
}

XpGraph XpGraph::parse(std::istream &in) {
  auto lines = text::read_lines(in);
  if (lines.empty() || lines[0].tokens[0] != "xpg")
    throw ParseError(ParseIssue::BadHeader, lines.empty() ? 0 : lines[0].number,
                     "expected 'xpg <m> <node-count>'");
  text::expect_arity(lines[0], 3);
  const int m = text::to_int(lines[0].tokens[1], lines[0].number);
  const int declared = text::to_int(lines[0].tokens[2], lines[0].number);

  std::vector<XpgNode> nodes;
  std::unordered_map<int, int> index_of_id;
  struct RawEdge {
    int from, to, label, line;
  };
  std::vector<RawEdge> raw_edges;
  for (size_t l = 1; l < lines.size(); ++l) {
    const auto &line = lines[l];
    const auto &kind = line.tokens[0];
    if (kind == "N" || kind == "T") {
      text::expect_arity(line, 3);
      XpgNode node;
      node.id = text::to_int(line.tokens[1], line.number);
      int value = text::to_int(line.tokens[2], line.number);
      if (kind == "N") {
        if (value < 1 || value > m)
          throw ParseError(ParseIssue::BadFeature, line.number,
                           "feature " + line.tokens[2] + " outside 1.." + std::to_string(m));
        node.var = value;
      } else {
        if (value != 0 && value != 1)
          throw ParseError(ParseIssue::BadValue, line.number,
                           "terminal label must be 0 or 1");
        node.label = value;
      }
      if (!index_of_id.emplace(node.id, static_cast<int>(nodes.size())).second)
        throw ParseError(ParseIssue::DuplicateId, line.number,
                         "node id " + std::to_string(node.id));
      nodes.push_back(node);
    } else if (kind == "E") {
      text::expect_arity(line, 4);
      int label = text::to_int(line.tokens[3], line.number);
      if (label != 0 && label != 1)
        throw ParseError(ParseIssue::BadValue, line.number, "edge label must be 0 or 1");
      raw_edges.push_back({text::to_int(line.tokens[1], line.number),
                           text::to_int(line.tokens[2], line.number), label,
                           line.number});
    } else {
      throw ParseError(ParseIssue::Malformed, line.number,
                       "unknown line type '" + kind + "'");
    }
  }
  if (static_cast<int>(nodes.size()) != declared)
    throw ParseError(ParseIssue::CountMismatch, lines[0].number,
                     "header declares " + std::to_string(declared) +
                         " nodes, file has " + std::to_string(nodes.size()));
  std::vector<XpgEdge> edges;
  for (const auto &re : raw_edges) {
    auto from = index_of_id.find(re.from);
    auto to = index_of_id.find(re.to);
    if (from == index_of_id.end() || to == index_of_id.end())
      throw ParseError(ParseIssue::DanglingReference, re.line,
                       "edge endpoint " +
                           std::to_string(from == index_of_id.end() ? re.from : re.to) +
                           " is not declared");
    edges.push_back({from->second, to->second, re.label == 1});
  }
  return from_parts(m, std::move(nodes), std::move(edges));
}

std::string XpGraph::serialize() const {
  std::ostringstream out;
  out << "xpg " << num_features_ << ' ' << size() << '\n';
  for (const auto &node : nodes_) {
    if (node.is_terminal())
      out << "T " << node.id << ' ' << node.label << '\n';
    else
      out << "N " << node.id << ' ' << node.var << '\n';
  }
  for (const auto &e : edges_)
    out << "E " << nodes_[e.from].id << ' ' << nodes_[e.to].id << ' '
        << (e.label ? 1 : 0) << '\n';
  return out.str();
}

bool evaluate_sigma(const XpGraph &xpg, std::span<const int> selectors) {
  if (static_cast<int>(selectors.size()) != xpg.num_features())
    throw Error(ErrorCode::InvalidArgument,
                "selector vector has " + std::to_string(selectors.size()) +
                    " entries, expected " + std::to_string(xpg.num_features()));
  std::vector<char> active(xpg.size(), 0);
  active[xpg.root()] = 1;
  for (int v : xpg.topological_order()) {
    if (!active[v])
      continue;
    const auto &node = xpg.node(v);
    if (node.is_terminal()) {
      if (node.label == 0)
        return false;
      continue;
    }
    const bool fixed = selectors[node.var - 1] != 0;
    for (int e : xpg.out_edges(v)) {
      const auto &edge = xpg.edges()[e];
      if (edge.label || !fixed)
        active[edge.to] = 1;
    }
  }
  return true;
}

XpGraph build_xpg(const Obdd &obdd, const Instance &instance) {
  if (instance.num_features() != obdd.num_vars())
    throw Error(ErrorCode::InvalidArgument, "instance length differs from feature count");
  if (obdd.classes().size() < 2)
    throw Error(ErrorCode::Precondition, "classifier must be non-constant");
  if (obdd.predict(instance.point) != instance.prediction)
    throw Error(ErrorCode::Precondition,
                "classifier predicts " + std::to_string(obdd.predict(instance.point)) +
                    " at the instance, file says " +
                    std::to_string(instance.prediction));
  std::vector<XpgNode> nodes;
  std::vector<XpgEdge> edges;
  for (int i = 0; i < obdd.size(); ++i) {
    const auto &n = obdd.node(i);
    if (n.is_terminal()) {
      nodes.push_back({n.id, 0, n.label == instance.prediction ? 1 : 0});
      continue;
    }
    nodes.push_back({n.id, n.var, 0});
    const bool value = instance.point[n.var - 1] != 0;
    edges.push_back({i, n.lo, !value});
    edges.push_back({i, n.hi, value});
  }
  return XpGraph::from_parts(obdd.num_vars(), std::move(nodes), std::move(edges));
}

XpGraph build_xpg(const DecisionTree &dt, const Instance &instance) {
  if (instance.num_features() != dt.num_vars())
    throw Error(ErrorCode::InvalidArgument, "instance length differs from feature count");
  if (dt.reachable_classes().size() < 2)
    throw Error(ErrorCode::Precondition, "classifier must be non-constant");
  const int predicted = dt.predict(instance.point);
  if (predicted != instance.prediction)
    throw Error(ErrorCode::Precondition,
                "classifier predicts " + std::to_string(predicted) +
                    " at the instance, file says " +
                    std::to_string(instance.prediction));
  std::vector<XpgNode> nodes;
  std::vector<XpgEdge> edges;
  for (int i = 0; i < dt.size(); ++i) {
    const auto &n = dt.node(i);
    if (n.is_leaf()) {
      nodes.push_back({n.id, 0, n.label == instance.prediction ? 1 : 0});
      continue;
    }
    nodes.push_back({n.id, n.var, 0});
    const int value = instance.point[n.var - 1];
    for (const auto &e : n.edges) {
      bool consistent = false;
      for (int v : e.values)
        consistent = consistent || v == value;
      edges.push_back({i, e.to, consistent});
    }
  }
  return XpGraph::from_parts(dt.num_vars(), std::move(nodes), std::move(edges));
}

} // namespace fmp
