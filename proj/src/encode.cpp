#include "fmp/encode.hpp"

#include "fmp/error.hpp"

#include <algorithm>
#include <cstdlib>

namespace fmp {

const char *to_string(Method method) {
  return method == Method::OneStep ? "one-step" : "two-step";
}

Method parse_method(const std::string &text) {
  if (text == "one-step")
    return Method::OneStep;
  if (text == "two-step")
    return Method::TwoStep;
  throw Error(ErrorCode::InvalidArgument,
              "unknown method '" + text + "' (expected one-step or two-step)");
}

FeatureSet Encoding::decode(const SatResult &model) const {
  if (!model.is_sat())
    throw Error(ErrorCode::InvalidArgument, "only a satisfying assignment can be decoded");
  int m = 0;
  while (m < vars.num_vars() && vars.info(m + 1).kind == VarKind::Selector)
    ++m;
  FeatureSet x(m);
  for (int i = 1; i <= m; ++i)
    if (model.value(vars.sel(i)))
      x.insert(i);
  return x;
}

namespace {

/// Writes clauses while tracking variables pinned by unit clauses, so that
/// definitions over pinned operands collapse before they reach the CNF.
class Emitter {
public:
  explicit Emitter(Encoding &enc) : enc_(enc) {}

  /// -1 unknown, 0 false, 1 true.
  int value(int lit) const {
    const int v = std::abs(lit);
    if (v >= static_cast<int>(fixed_.size()) || fixed_[v] < 0)
      return -1;
    return lit > 0 ? fixed_[v] : 1 - fixed_[v];
  }

  void unit(int lit) {
    sync();
    enc_.cnf.add_clause({lit});
    pin(lit);
  }

  void clause(Clause c) {
    sync();
    enc_.cnf.add_clause(std::move(c));
  }

  void define_or(int v, std::vector<int> lits) {
    std::vector<int> open;
    for (int l : lits) {
      const int val = value(l);
      if (val == 1)
        return unit(v);
      if (val == -1 && std::find(open.begin(), open.end(), l) == open.end())
        open.push_back(l);
    }
    if (open.empty())
      return unit(-v);
    sync();
    for (auto &c : clausify_eq_or(v, open))
      enc_.cnf.add_clause(std::move(c));
  }

  void define_and(int v, std::vector<int> lits) {
    std::vector<int> open;
    for (int l : lits) {
      const int val = value(l);
      if (val == 0)
        return unit(-v);
      if (val == -1 && std::find(open.begin(), open.end(), l) == open.end())
        open.push_back(l);
    }
    if (open.empty())
      return unit(v);
    sync();
    for (auto &c : clausify_eq_and(v, open))
      enc_.cnf.add_clause(std::move(c));
  }

  /// Literal standing for a ∧ b where neither is pinned: a fresh aux
  /// variable defined as the conjunction.
  int conjunction(int a, int b, const std::string &name) {
    VarInfo info;
    info.kind = VarKind::Aux;
    info.name = name;
    const int aux = enc_.vars.add(std::move(info));
    define_and(aux, {a, b});
    return aux;
  }

private:
  void sync() { enc_.cnf.num_vars = enc_.vars.num_vars(); }

  void pin(int lit) {
    const int v = std::abs(lit);
    if (v >= static_cast<int>(fixed_.size()))
      fixed_.resize(static_cast<size_t>(v) + 1, -1);
    // A contradicting unit leaves the first value; the CNF is unsatisfiable
    // either way.
    if (fixed_[v] < 0)
      fixed_[v] = lit > 0 ? 1 : 0;
  }

  Encoding &enc_;
  std::vector<int> fixed_;
};

std::vector<int> replicas_for(int m, int target, Method method) {
  if (method == Method::TwoStep)
    return {0, target};
  std::vector<int> ks;
  for (int k = 0; k <= m; ++k)
    ks.push_back(k);
  return ks;
}

void check_target(int target, int m) {
  if (target < 1 || target > m)
    throw Error(ErrorCode::InvalidArgument,
                "target " + std::to_string(target) + " outside 1.." + std::to_string(m));
}

void add_selectors(Encoding &enc, int m) {
  for (int i = 1; i <= m; ++i) {
    VarInfo info;
    info.kind = VarKind::Selector;
    info.feature = i;
    info.name = "s" + std::to_string(i);
    enc.vars.add(std::move(info));
  }
}

int add_node_var(Encoding &enc, int k, int index, int label) {
  VarInfo info;
  info.kind = VarKind::Node;
  info.replica = k;
  info.node = index;
  info.name = "n" + std::to_string(k) + "_" + std::to_string(label);
  return enc.vars.add(std::move(info));
}

} // namespace

Encoding encode_sdd(const Sdd &sdd, const Instance &instance, int target, Method method) {
  const int m = sdd.num_vars();
  check_target(target, m);
  if (instance.num_features() != m)
    throw Error(ErrorCode::InvalidArgument,
                "instance has " + std::to_string(instance.num_features()) +
                    " values, diagram has " + std::to_string(m) + " features");
  if (instance.prediction != 0)
    throw Error(ErrorCode::Precondition,
                "the SDD encoding needs a class-0 instance; negate the diagram first");
  if (evaluate(sdd, instance.point))
    throw Error(ErrorCode::Precondition, "diagram is not false at the instance");

  Encoding enc;
  enc.method = method;
  enc.target = target;
  enc.replicas = replicas_for(m, target, method);
  add_selectors(enc, m);

  for (int k : enc.replicas)
    for (int j = 0; j < sdd.size(); ++j) {
      add_node_var(enc, k, j, j);
      const auto &node = sdd.node(j);
      for (int e = 0; e < static_cast<int>(node.elements.size()); ++e) {
        VarInfo info;
        info.kind = VarKind::Element;
        info.replica = k;
        info.node = j;
        info.element = e;
        info.name = "e" + std::to_string(k) + "_" + std::to_string(j) + "_" +
                    std::to_string(e);
        enc.vars.add(std::move(info));
      }
    }

  Emitter out(enc);
  for (int k : enc.replicas) {
    for (int j = 0; j < sdd.size(); ++j) {
      const auto &node = sdd.node(j);
      const int n = enc.vars.node(k, j);
      switch (node.kind) {
      case SddKind::True:
        out.unit(n);
        break;
      case SddKind::False:
        out.unit(-n);
        break;
      case SddKind::Literal: {
        const int i = std::abs(node.literal);
        const bool satisfied = (node.literal > 0) == (instance.point[i - 1] != 0);
        if (satisfied || i == k)
          out.unit(n);
        else
          out.define_or(n, {-enc.vars.sel(i)});
        break;
      }
      case SddKind::Decision: {
        std::vector<int> elems;
        for (int e = 0; e < static_cast<int>(node.elements.size()); ++e) {
          const int ev = enc.vars.element(k, j, e);
          const auto &el = node.elements[e];
          out.define_and(ev, {enc.vars.node(k, el.prime), enc.vars.node(k, el.sub)});
          elems.push_back(ev);
        }
        out.define_or(n, elems);
        break;
      }
      }
    }
  }

  out.unit(-enc.vars.node(0, sdd.root()));
  for (int k : enc.replicas)
    if (k > 0)
      out.define_or(enc.vars.sel(k), {enc.vars.node(k, sdd.root())});
  out.unit(enc.vars.sel(target));
  enc.cnf.num_vars = enc.vars.num_vars();
  return enc;
}

Encoding encode_xpg(const XpGraph &xpg, int target, Method method) {
  const int m = xpg.num_features();
  check_target(target, m);

  Encoding enc;
  enc.method = method;
  enc.target = target;
  enc.replicas = replicas_for(m, target, method);
  add_selectors(enc, m);

  for (int k : enc.replicas) {
    for (int j = 0; j < xpg.size(); ++j)
      add_node_var(enc, k, j, xpg.node(j).id);
    VarInfo info;
    info.kind = VarKind::Sigma;
    info.replica = k;
    info.name = "sigma" + std::to_string(k);
    enc.vars.add(std::move(info));
  }

  Emitter out(enc);
  for (int k : enc.replicas) {
    for (int j : xpg.topological_order()) {
      const int n = enc.vars.node(k, j);
      if (j == xpg.root()) {
        out.unit(n);
        continue;
      }
      // Each incoming edge contributes n_p when it is passable outright, and
      // n_p ∧ ¬s_i when it is only passable with feature i free.
      std::vector<int> plain;
      std::vector<std::pair<int, int>> guarded;
      for (int e : xpg.in_edges(j)) {
        const auto &edge = xpg.edges()[e];
        const int parent = enc.vars.node(k, edge.from);
        const int i = xpg.node(edge.from).var;
        if (edge.label || i == k) {
          plain.push_back(parent);
          continue;
        }
        const int pv = out.value(parent);
        if (pv == 0)
          continue;
        if (pv == 1)
          plain.push_back(-enc.vars.sel(i));
        else
          guarded.emplace_back(parent, -enc.vars.sel(i));
      }
      if (std::any_of(plain.begin(), plain.end(), [&](int l) { return out.value(l) == 1; })) {
        out.unit(n);
        continue;
      }
      if (plain.empty() && guarded.size() == 1) {
        out.define_and(n, {guarded[0].first, guarded[0].second});
        continue;
      }
      std::vector<int> terms = plain;
      for (size_t g = 0; g < guarded.size(); ++g)
        terms.push_back(out.conjunction(guarded[g].first, guarded[g].second,
                                        "aux" + std::to_string(k) + "_" +
                                            std::to_string(xpg.node(j).id) + "_" +
                                            std::to_string(g)));
      out.define_or(n, terms);
    }
    std::vector<int> blocked;
    for (int j = 0; j < xpg.size(); ++j)
      if (xpg.node(j).is_terminal() && xpg.node(j).label == 0)
        blocked.push_back(-enc.vars.node(k, j));
    const int sigma = enc.vars.sigma(k);
    if (blocked.empty())
      out.unit(sigma);
    else
      out.define_and(sigma, blocked);
  }

  out.unit(enc.vars.sigma(0));
  for (int k : enc.replicas)
    if (k > 0)
      out.define_or(enc.vars.sel(k), {-enc.vars.sigma(k)});
  out.unit(enc.vars.sel(target));
  enc.cnf.num_vars = enc.vars.num_vars();
  return enc;
}

} // namespace fmp
