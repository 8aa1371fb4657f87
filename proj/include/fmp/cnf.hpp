#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace fmp {

using Clause = std::vector<int>;

/// Clauses over variables 1..num_vars; literals are signed variable ids.
struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  /// Throws if a literal is 0 or names a variable outside 1..num_vars.
  void add_clause(Clause clause);
  void validate() const;
};

/// v ⟺ (l1 ∨ ... ∨ ln), both directions. Throws on an empty list.
std::vector<Clause> clausify_eq_or(int v, const std::vector<int> &lits);
/// v ⟺ (l1 ∧ ... ∧ ln), both directions. Throws on an empty list.
std::vector<Clause> clausify_eq_and(int v, const std::vector<int> &lits);

enum class VarKind { Selector, Node, Element, Sigma, Aux };

struct VarInfo {
  VarKind kind = VarKind::Aux;
  int replica = -1;
  int node = -1;    // diagram arena index
  int element = -1; // element position within a decision node
  int feature = 0;  // selectors only
  std::string name;
};

/// Maps encoding symbols (s_i, n^k_j, σ^k, ...) to CNF variables.
class VarMap {
public:
  int add(VarInfo info);

  int num_vars() const { return static_cast<int>(info_.size()); }
  const VarInfo &info(int var) const { return info_.at(var - 1); }

  int sel(int feature) const;
  int node(int replica, int node) const;
  int element(int replica, int node, int element) const;
  int sigma(int replica) const;
  bool has_sigma(int replica) const { return sigma_.count(replica) != 0; }
  bool has_node(int replica, int node) const { return node_.count({replica, node}) != 0; }

private:
  std::vector<VarInfo> info_;
  std::map<int, int> sel_;
  std::map<std::pair<int, int>, int> node_;
  std::map<std::tuple<int, int, int>, int> element_;
  std::map<int, int> sigma_;
};

/// DIMACS text. With a legend, one `c map <var> <name>` line per variable
/// precedes the header.
std::string write_dimacs(const CnfFormula &cnf, const VarMap *legend = nullptr);
CnfFormula parse_dimacs(std::istream &in);
CnfFormula parse_dimacs_string(const std::string &text);

} // namespace fmp
