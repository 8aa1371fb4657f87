#include "fmp/cnf.hpp"

#include "fmp/error.hpp"

#include <cstdlib>
#include <sstream>

namespace fmp {

void CnfFormula::add_clause(Clause clause) {
  for (int lit : clause)
    if (lit == 0 || std::abs(lit) > num_vars)
      throw Error(ErrorCode::Internal,
                  "literal " + std::to_string(lit) + " outside 1.." + std::to_string(num_vars));
  clauses.push_back(std::move(clause));
}

void CnfFormula::validate() const {
  for (const auto &clause : clauses)
    for (int lit : clause)
      if (lit == 0 || std::abs(lit) > num_vars)
        throw Error(ErrorCode::InvalidArgument,
                    "literal " + std::to_string(lit) + " outside 1.." +
                        std::to_string(num_vars));
}

std::vector<Clause> clausify_eq_or(int v, const std::vector<int> &lits) {
  if (lits.empty())
    throw Error(ErrorCode::InvalidArgument, "v <=> OR() needs at least one operand");
  std::vector<Clause> out;
  Clause big{-v};
  big.insert(big.end(), lits.begin(), lits.end());
  out.push_back(std::move(big));
  for (int l : lits)
    out.push_back({v, -l});
  return out;
}

std::vector<Clause> clausify_eq_and(int v, const std::vector<int> &lits) {
  if (lits.empty())
    throw Error(ErrorCode::InvalidArgument, "v <=> AND() needs at least one operand");
  std::vector<Clause> out;
  for (int l : lits)
    out.push_back({-v, l});
  Clause big{v};
  for (int l : lits)
    big.push_back(-l);
  out.push_back(std::move(big));
  return out;
}

int VarMap::add(VarInfo info) {
  const int var = num_vars() + 1;
  switch (info.kind) {
  case VarKind::Selector: sel_[info.feature] = var; break;
  case VarKind::Node: node_[{info.replica, info.node}] = var; break;
  case VarKind::Element: element_[{info.replica, info.node, info.element}] = var; break;
  case VarKind::Sigma: sigma_[info.replica] = var; break;
  case VarKind::Aux: break;
  }
  info_.push_back(std::move(info));
  return var;
}

int VarMap::sel(int feature) const { return sel_.at(feature); }
int VarMap::node(int replica, int node) const { return node_.at({replica, node}); }
int VarMap::element(int replica, int node, int element) const {
  return element_.at({replica, node, element});
}
int VarMap::sigma(int replica) const { return sigma_.at(replica); }

std::string write_dimacs(const CnfFormula &cnf, const VarMap *legend) {
  std::string out;
  if (legend)
    for (int v = 1; v <= legend->num_vars(); ++v)
      out += "c map " + std::to_string(v) + ' ' + legend->info(v).name + '\n';
  out += "p cnf " + std::to_string(cnf.num_vars) + ' ' +
         std::to_string(cnf.clauses.size()) + '\n';
  for (const auto &clause : cnf.clauses) {
    for (int lit : clause) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

CnfFormula parse_dimacs(std::istream &in) {
  CnfFormula cnf;
  bool header = false;
  int declared_clauses = 0;
  std::string line;
  Clause current;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c" || first[0] == '%')
      continue;
    if (first == "p") {
      std::string fmt;
      if (header || !(ls >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf" ||
          cnf.num_vars < 0 || declared_clauses < 0)
        throw ParseError(ParseIssue::BadHeader, number, "expected 'p cnf <vars> <clauses>'");
      header = true;
      continue;
    }
    if (!header)
      throw ParseError(ParseIssue::BadHeader, number, "clause before 'p cnf' header");
    std::istringstream all(line);
    std::string token;
    while (all >> token) {
      char *end = nullptr;
      long lit = std::strtol(token.c_str(), &end, 10);
      if (*end != '\0')
        throw ParseError(ParseIssue::Malformed, number, "bad literal '" + token + "'");
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::labs(lit) > cnf.num_vars)
          throw ParseError(ParseIssue::Malformed, number,
                           "literal " + token + " exceeds the declared variable count");
        current.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!current.empty())
    cnf.clauses.push_back(std::move(current));
  if (!header)
    throw ParseError(ParseIssue::BadHeader, 0, "missing 'p cnf' header");
  if (static_cast<int>(cnf.clauses.size()) != declared_clauses)
    throw ParseError(ParseIssue::CountMismatch, 0,
                     "header declares " + std::to_string(declared_clauses) +
                         " clauses, file has " + std::to_string(cnf.clauses.size()));
  return cnf;
}

CnfFormula parse_dimacs_string(const std::string &text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

} // namespace fmp
