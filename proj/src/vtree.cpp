#include "fmp/vtree.hpp"

#include "fmp/error.hpp"
#include "text.hpp"

#include <functional>
#include <sstream>

namespace fmp {

const char *to_string(ParseIssue issue) {
  switch (issue) {
  case ParseIssue::Malformed: return "malformed line";
  case ParseIssue::BadHeader: return "bad header";
  case ParseIssue::CountMismatch: return "node count mismatch";
  case ParseIssue::DuplicateId: return "duplicate node id";
  case ParseIssue::DanglingReference: return "dangling reference";
  case ParseIssue::DuplicateLeaf: return "duplicate leaf variable";
  case ParseIssue::ForwardReference: return "forward reference";
  case ParseIssue::UnknownVtreeNode: return "unknown vtree node";
  case ParseIssue::LiteralOutsideVtree: return "literal outside vtree";
  case ParseIssue::EmptyElements: return "empty element list";
  case ParseIssue::NotDecomposable: return "element outside vtree split";
  case ParseIssue::BadFeature: return "bad feature";
  case ParseIssue::BadValue: return "bad value";
  case ParseIssue::MultipleRoots: return "multiple roots";
  case ParseIssue::NoRoot: return "no root";
  case ParseIssue::Cycle: return "cycle";
  case ParseIssue::MultipleOneEdges: return "two 1-labeled out-edges";
  case ParseIssue::NoOneTerminal: return "no reachable 1-terminal";
  case ParseIssue::MissingOutEdge: return "non-terminal without out-edges";
  case ParseIssue::NotAPartition: return "edge values do not partition the domain";
  case ParseIssue::NotATree: return "not a tree";
  }
  return "parse error";
}

Vtree Vtree::parse_string(const std::string &text) {
  std::istringstream in(text);
  return parse(in);
}

Vtree Vtree::parse(std::istream &in) {
  auto lines = text::read_lines(in);
  if (lines.empty() || lines[0].tokens[0] != "vtree")
    throw ParseError(ParseIssue::BadHeader, lines.empty() ? 0 : lines[0].number,
                     "expected 'vtree <node-count>'");
  text::expect_arity(lines[0], 2);
  int declared = text::to_int(lines[0].tokens[1], lines[0].number);

  struct Raw {
    VtreeNode node;
    int left_id = -1, right_id = -1;
    int line = 0;
  };
  std::vector<Raw> raws;
  std::unordered_map<int, int> index_of_id;
  std::unordered_map<int, int> leaf_line;
  for (size_t l = 1; l < lines.size(); ++l) {
    const auto &line = lines[l];
    const auto &kind = line.tokens[0];
    Raw raw;
    raw.line = line.number;
    if (kind == "L") {
      text::expect_arity(line, 3);
      raw.node.id = text::to_int(line.tokens[1], line.number);
      raw.node.var = text::to_int(line.tokens[2], line.number);
      if (raw.node.var < 1)
        throw ParseError(ParseIssue::BadFeature, line.number,
                         "leaf variables are 1-based");
      if (!leaf_line.emplace(raw.node.var, line.number).second)
        throw ParseError(ParseIssue::DuplicateLeaf, line.number,
                         "variable " + std::to_string(raw.node.var) +
                             " already labels a leaf");
    } else if (kind == "I") {
      text::expect_arity(line, 4);
      raw.node.id = text::to_int(line.tokens[1], line.number);
      raw.left_id = text::to_int(line.tokens[2], line.number);
      raw.right_id = text::to_int(line.tokens[3], line.number);
    } else {
      throw ParseError(ParseIssue::Malformed, line.number,
                       "unknown line type '" + kind + "'");
    }
    if (raw.node.id < 0)
      throw ParseError(ParseIssue::Malformed, line.number, "negative node id");
    if (!index_of_id.emplace(raw.node.id, static_cast<int>(raws.size())).second)
      throw ParseError(ParseIssue::DuplicateId, line.number,
                       "node id " + std::to_string(raw.node.id));
    raws.push_back(raw);
  }
  if (static_cast<int>(raws.size()) != declared)
    throw ParseError(ParseIssue::CountMismatch, lines[0].number,
                     "header declares " + std::to_string(declared) +
                         " nodes, file has " + std::to_string(raws.size()));

  std::vector<VtreeNode> nodes;
  nodes.reserve(raws.size());
  for (auto &raw : raws) {
    if (raw.left_id >= 0 || raw.right_id >= 0) {
      auto l = index_of_id.find(raw.left_id);
      auto r = index_of_id.find(raw.right_id);
      if (l == index_of_id.end() || r == index_of_id.end())
        throw ParseError(ParseIssue::DanglingReference, raw.line,
                         "child id " +
                             std::to_string(l == index_of_id.end() ? raw.left_id
                                                                   : raw.right_id) +
                             " is not declared");
      raw.node.left = l->second;
      raw.node.right = r->second;
    }
    nodes.push_back(raw.node);
  }
  return from_nodes(std::move(nodes));
}

Vtree Vtree::from_nodes(std::vector<VtreeNode> nodes) {
  Vtree t;
  t.nodes_ = std::move(nodes);
  t.index();
  return t;
}

void Vtree::index() {
  const int n = size();
  if (n == 0)
    throw ParseError(ParseIssue::NoRoot, 0, "empty vtree");
  std::vector<int> parents(n, 0);
  for (const auto &node : nodes_) {
    if (node.is_leaf())
      continue;
    if (node.left == node.right)
      throw ParseError(ParseIssue::NotATree, 0,
                       "node " + std::to_string(node.id) + " has identical children");
    ++parents[node.left];
    ++parents[node.right];
  }
  root_ = -1;
  for (int i = 0; i < n; ++i) {
    if (parents[i] > 1)
      throw ParseError(ParseIssue::NotATree, 0,
                       "node " + std::to_string(nodes_[i].id) + " has several parents");
    if (parents[i] == 0) {
      if (root_ >= 0)
        throw ParseError(ParseIssue::MultipleRoots, 0, "vtree has several roots");
      root_ = i;
    }
  }
  if (root_ < 0)
    throw ParseError(ParseIssue::Cycle, 0, "vtree has no root");

  index_of_id_.clear();
  for (int i = 0; i < n; ++i)
    index_of_id_[nodes_[i].id] = i;

  first_leaf_.assign(n, -1);
  last_leaf_.assign(n, -1);
  leaf_order_.clear();
  int visited = 0;
  // Iterative in-order walk; a cycle would leave nodes unvisited.
  std::vector<std::pair<int, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    const auto &node = nodes_[v];
    if (node.is_leaf()) {
      ++visited;
      first_leaf_[v] = last_leaf_[v] = static_cast<int>(leaf_order_.size());
      leaf_order_.push_back(node.var);
      continue;
    }
    if (expanded) {
      first_leaf_[v] = first_leaf_[node.left];
      last_leaf_[v] = last_leaf_[node.right];
      continue;
    }
    ++visited;
    if (visited > n)
      throw ParseError(ParseIssue::Cycle, 0, "vtree contains a cycle");
    stack.push_back({v, true});
    stack.push_back({node.right, false});
    stack.push_back({node.left, false});
  }
  if (visited != n)
    throw ParseError(ParseIssue::Cycle, 0, "vtree nodes unreachable from the root");

  num_vars_ = static_cast<int>(leaf_order_.size());
  leaf_of_var_.assign(num_vars_ + 1, -1);
  for (int i = 0; i < n; ++i) {
    if (!nodes_[i].is_leaf())
      continue;
    int var = nodes_[i].var;
    if (var > num_vars_)
      throw ParseError(ParseIssue::BadFeature, 0,
                       "leaf variables must be exactly 1.." + std::to_string(num_vars_));
    leaf_of_var_[var] = i;
  }
}

int Vtree::index_of(int id) const {
  auto it = index_of_id_.find(id);
  return it == index_of_id_.end() ? -1 : it->second;
}

bool Vtree::is_within(int index, int ancestor) const {
  return first_leaf_.at(ancestor) <= first_leaf_.at(index) &&
         last_leaf_[index] <= last_leaf_[ancestor];
}

std::vector<int> Vtree::vars_below(int index) const {
  return {leaf_order_.begin() + first_leaf_.at(index),
          leaf_order_.begin() + last_leaf_.at(index) + 1};
}

Vtree Vtree::right_linear(std::span<const int> order) {
  if (order.empty())
    throw Error(ErrorCode::InvalidArgument, "vtree needs at least one variable");
  std::vector<VtreeNode> nodes;
  for (int var : order)
    nodes.push_back({static_cast<int>(nodes.size()), var, -1, -1});
  int right = static_cast<int>(order.size()) - 1;
  for (int i = static_cast<int>(order.size()) - 2; i >= 0; --i) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back({id, 0, i, right});
    right = id;
  }
  return from_nodes(std::move(nodes));
}

Vtree Vtree::balanced(int num_vars) {
  if (num_vars < 1)
    throw Error(ErrorCode::InvalidArgument, "vtree needs at least one variable");
  std::vector<VtreeNode> nodes;
  std::function<int(int, int)> build = [&](int lo, int hi) -> int {
    if (lo == hi) {
      nodes.push_back({static_cast<int>(nodes.size()), lo, -1, -1});
      return static_cast<int>(nodes.size()) - 1;
    }
    int mid = (lo + hi) / 2;
    int l = build(lo, mid);
    int r = build(mid + 1, hi);
    nodes.push_back({static_cast<int>(nodes.size()), 0, l, r});
    return static_cast<int>(nodes.size()) - 1;
  };
  build(1, num_vars);
  return from_nodes(std::move(nodes));
}

std::string Vtree::serialize() const {
  std::ostringstream out;
  out << "vtree " << size() << '\n';
  for (const auto &node : nodes_) {
    if (node.is_leaf())
      out << "L " << node.id << ' ' << node.var << '\n';
    else
      out << "I " << node.id << ' ' << nodes_[node.left].id << ' '
          << nodes_[node.right].id << '\n';
  }
  return out.str();
}

} // namespace fmp
