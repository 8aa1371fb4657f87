#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fmp {

/// A vtree node is a leaf carrying a 1-based variable or an internal node
/// with two children. Children are arena indices, not file ids.
struct VtreeNode {
  int id = 0;     // id as written in the file
  int var = 0;    // leaf variable, 0 for internal nodes
  int left = -1;  // arena index
  int right = -1; // arena index

  bool is_leaf() const { return left < 0; }
};

/// Full binary tree over the variables {1..m}. Immutable once built.
class Vtree {
public:
  /// Parses the `vtree <count>` / `L id var` / `I id left right` format.
  static Vtree parse(std::istream &in);
  static Vtree parse_string(const std::string &text);

  /// Right-linear vtree: leaf order[0] hangs left of the root, and so on.
  static Vtree right_linear(std::span<const int> order);
  /// Balanced vtree over 1..m in ascending order.
  static Vtree balanced(int num_vars);

  int num_vars() const { return num_vars_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  const VtreeNode &node(int index) const { return nodes_.at(index); }

  /// Arena index for a file id, or -1.
  int index_of(int id) const;
  /// Arena index of the leaf labelled `var`.
  int leaf_of(int var) const { return leaf_of_var_.at(var); }
  /// True iff `index` lies in the subtree rooted at `ancestor`.
  bool is_within(int index, int ancestor) const;
  /// Variables at the leaves below `index`, in left-to-right order.
  std::vector<int> vars_below(int index) const;

  std::string serialize() const;

private:
  Vtree() = default;
  static Vtree from_nodes(std::vector<VtreeNode> nodes);
  void index();

  std::vector<VtreeNode> nodes_;
  int root_ = -1;
  int num_vars_ = 0;
  std::unordered_map<int, int> index_of_id_;
  std::vector<int> leaf_of_var_; // indexed by var, slot 0 unused
  std::vector<int> first_leaf_;  // in-order leaf interval per node
  std::vector<int> last_leaf_;
  std::vector<int> leaf_order_;  // vars left to right
};

} // namespace fmp
