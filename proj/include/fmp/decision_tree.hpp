#pragma once

#include "fmp/instance.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fmp {

struct DtEdge {
  int to = -1;             // arena index
  std::vector<int> values; // domain indices admitted by this edge
};

struct DtNode {
  int id = 0;
  int var = 0;   // 1-based feature; 0 marks a leaf
  int label = 0; // class, leaves only
  std::vector<DtEdge> edges;

  bool is_leaf() const { return var == 0; }
};

/// Decision tree over finite (possibly multi-valued) feature domains.
/// Features without a DOM line default to the boolean domain {0,1}.
class DecisionTree {
public:
  static DecisionTree parse(std::istream &in);
  static DecisionTree parse_string(const std::string &text);

  int num_vars() const { return static_cast<int>(domains_.size()); }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  const DtNode &node(int index) const { return nodes_.at(index); }
  const std::vector<std::string> &domain(int var) const { return domains_.at(var - 1); }

  /// Index of `token` in the domain of `var`; throws on unknown values.
  int value_index(int var, const std::string &token) const;
  Instance bind(const InstanceRecord &record) const;

  /// `point` holds domain indices.
  int predict(std::span<const int> point) const;
  /// Classes of leaves reachable by some consistent path, ascending.
  std::vector<int> reachable_classes() const;

private:
  std::vector<std::vector<std::string>> domains_;
  std::vector<DtNode> nodes_;
  int root_ = -1;
};

} // namespace fmp
