#pragma once

#include "fmp/vtree.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fmp {

enum class SddKind : std::uint8_t { False, True, Literal, Decision };

struct SddElement {
  int prime = -1;
  int sub = -1;

  friend auto operator<=>(const SddElement &, const SddElement &) = default;
};

/// Children always precede their parents in the arena, so a forward scan is
/// a bottom-up traversal.
struct SddNode {
  SddKind kind = SddKind::False;
  int vtree = -1;  // vtree arena index; -1 for constants
  int literal = 0; // signed 1-based variable, Literal nodes only
  std::vector<SddElement> elements;
};

/// Partial assignment of features to booleans.
class Term {
public:
  explicit Term(int num_vars) : values_(static_cast<size_t>(num_vars) + 1, -1) {}

  int num_vars() const { return static_cast<int>(values_.size()) - 1; }
  /// Throws when `var` is out of range or already set to the opposite value.
  void assign(int var, bool value);
  bool is_assigned(int var) const { return values_.at(var) >= 0; }
  bool value(int var) const { return values_.at(var) == 1; }

private:
  std::vector<std::int8_t> values_;
};

/// Structured decision diagram over a shared vtree. Immutable.
class Sdd {
public:
  /// Parses the `sdd <count>` text format; the last declared node is the root.
  static Sdd parse(std::istream &in, std::shared_ptr<const Vtree> vtree);
  static Sdd parse_string(const std::string &text,
                          std::shared_ptr<const Vtree> vtree);

  const Vtree &vtree() const { return *vtree_; }
  const std::shared_ptr<const Vtree> &vtree_ptr() const { return vtree_; }
  int num_vars() const { return vtree_->num_vars(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  const SddNode &node(int index) const { return nodes_.at(index); }
  const std::vector<SddNode> &nodes() const { return nodes_; }

  /// Node ids are arena indices; the root is written last.
  std::string serialize() const;

private:
  friend class SddBuilder;
  Sdd() = default;

  std::shared_ptr<const Vtree> vtree_;
  std::vector<SddNode> nodes_;
  int root_ = -1;
};

/// Assembles an Sdd node by node. Constants, literals and identical decision
/// nodes are shared. `finish` keeps only the nodes reachable from the root
/// and checks vtree placement.
class SddBuilder {
public:
  explicit SddBuilder(std::shared_ptr<const Vtree> vtree);

  int constant(bool value);
  int literal(int signed_var);
  int decision(int vtree_index, std::vector<SddElement> elements);

  const SddNode &node(int index) const { return nodes_.at(index); }

  Sdd finish(int root) &&;

private:
  std::shared_ptr<const Vtree> vtree_;
  std::vector<SddNode> nodes_;
  int constant_[2] = {-1, -1};
  std::map<int, int> literal_;
  std::map<std::pair<int, std::vector<SddElement>>, int> decision_;
};

/// Semantic value at a full point (nonzero entries are true). Each node is
/// visited once.
bool evaluate(const Sdd &sdd, std::span<const int> point);

/// Replaces literals on assigned variables by constants, with local
/// simplification only. The result is not canonical.
Sdd condition(const Sdd &sdd, const Term &term);

/// Negates subs recursively, leaving primes untouched.
Sdd negate(const Sdd &sdd);

/// One bottom-up pass; relies on primes and subs having disjoint variables.
bool is_consistent(const Sdd &sdd);

/// is_consistent(condition(sdd, fixed)) without building the conditioned
/// diagram.
bool consistency_under(const Sdd &sdd, const Term &fixed);

/// Checks vtree placement: literals sit at their variable's leaf, primes lie
/// in the left subtree of their decision node's vtree node and subs in the
/// right one. Throws ParseError(NotDecomposable) on violation.
void check_structure(const Sdd &sdd);

/// Compiles a truth table (bit i of the index is variable i+1) into a
/// compressed SDD over `vtree`. Exponential; meant for small m.
Sdd compile_truth_table(std::shared_ptr<const Vtree> vtree,
                        const std::vector<bool> &table);

} // namespace fmp
