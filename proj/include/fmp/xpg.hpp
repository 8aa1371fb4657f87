#pragma once

#include "fmp/decision_tree.hpp"
#include "fmp/instance.hpp"
#include "fmp/obdd.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fmp {

struct XpgNode {
  int id = 0;
  int var = 0;   // selector index for non-terminals; 0 marks a terminal
  int label = 0; // 0/1, terminals only

  bool is_terminal() const { return var == 0; }
};

struct XpgEdge {
  int from = -1; // arena indices
  int to = -1;
  bool label = false;
};

/// Explanation graph: an instance-specialised DAG whose edges are labelled
/// 1 when consistent with the instance and whose terminals are labelled 1
/// when they carry the predicted class. Immutable once built.
class XpGraph {
public:
  /// Builds and checks every structural invariant.
  static XpGraph from_parts(int num_features, std::vector<XpgNode> nodes,
                            std::vector<XpgEdge> edges);
  static XpGraph parse(std::istream &in);
  static XpGraph parse_string(const std::string &text);
  std::string serialize() const;

  int num_features() const { return num_features_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  const XpgNode &node(int index) const { return nodes_.at(index); }
  const std::vector<XpgEdge> &edges() const { return edges_; }
  /// Edge indices entering / leaving a node, in input order.
  const std::vector<int> &in_edges(int index) const { return in_.at(index); }
  const std::vector<int> &out_edges(int index) const { return out_.at(index); }
  /// Nodes with every parent before its children.
  const std::vector<int> &topological_order() const { return topo_; }

private:
  XpGraph() = default;

  int num_features_ = 0;
  std::vector<XpgNode> nodes_;
  std::vector<XpgEdge> edges_;
  std::vector<std::vector<int>> in_, out_;
  std::vector<int> topo_;
  int root_ = -1;
};

/// Forward activation from the root; 1 iff no 0-labelled terminal is active.
/// `selectors[i]` nonzero means feature i+1 is fixed to its instance value.
bool evaluate_sigma(const XpGraph &xpg, std::span<const int> selectors);

/// Throws Error(Precondition) when the classifier is constant or its
/// prediction at the instance differs from `instance.prediction`.
XpGraph build_xpg(const Obdd &obdd, const Instance &instance);
XpGraph build_xpg(const DecisionTree &dt, const Instance &instance);

} // namespace fmp
