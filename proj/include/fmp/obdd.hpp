#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fmp {

struct ObddNode {
  int id = 0;
  int var = 0;   // 1-based feature; 0 marks a terminal
  int lo = -1;   // arena index followed when the feature is 0
  int hi = -1;   // arena index followed when the feature is 1
  int label = 0; // class, terminals only

  bool is_terminal() const { return var == 0; }
};

/// Binary decision diagram classifier. Every feature is tested at most once
/// along any root-to-terminal path. Children precede parents in the arena
/// and the last node is the root.
class Obdd {
public:
  static Obdd parse(std::istream &in);
  static Obdd parse_string(const std::string &text);
  /// Validates and keeps the nodes reachable from the last one.
  static Obdd from_nodes(int num_vars, std::vector<ObddNode> nodes);

  int num_vars() const { return num_vars_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return static_cast<int>(nodes_.size()) - 1; }
  const ObddNode &node(int index) const { return nodes_.at(index); }
  const std::vector<ObddNode> &nodes() const { return nodes_; }

  int predict(std::span<const int> point) const;
  /// Distinct terminal classes, ascending.
  std::vector<int> classes() const;

  std::string serialize() const;

private:
  int num_vars_ = 0;
  std::vector<ObddNode> nodes_;
};

} // namespace fmp
