#pragma once

#include "fmp/cnf.hpp"
#include "fmp/feature_set.hpp"
#include "fmp/instance.hpp"
#include "fmp/sat.hpp"
#include "fmp/sdd.hpp"
#include "fmp/xpg.hpp"

#include <string>
#include <vector>

namespace fmp {

/// One-step: a replica per feature plus replica 0, so every model is an AXp.
/// Two-step: replicas 0 and t only; a model is a weak AXp seed that still
/// needs t.
enum class Method { OneStep, TwoStep };

const char *to_string(Method method);
/// Accepts "one-step" and "two-step".
Method parse_method(const std::string &text);

struct Encoding {
  CnfFormula cnf;
  VarMap vars;
  Method method = Method::TwoStep;
  int target = 0;
  /// The replicas that were built, ascending.
  std::vector<int> replicas;

  /// Selector values of a model: {i : s_i true}.
  FeatureSet decode(const SatResult &model) const;
};

/// Membership encoding for an SDD that is ⊥ at the instance. For a ⊤
/// instance pass the negated diagram and flip the class. Throws
/// Error(Precondition) when the diagram is ⊤ at the instance and
/// Error(InvalidArgument) when t is outside 1..m.
Encoding encode_sdd(const Sdd &sdd, const Instance &instance, int target,
                    Method method);
Encoding encode_xpg(const XpGraph &xpg, int target, Method method);

inline Encoding encode_sdd_onestep(const Sdd &sdd, const Instance &instance, int t) {
  return encode_sdd(sdd, instance, t, Method::OneStep);
}
inline Encoding encode_sdd_twostep(const Sdd &sdd, const Instance &instance, int t) {
  return encode_sdd(sdd, instance, t, Method::TwoStep);
}
inline Encoding encode_xpg_onestep(const XpGraph &xpg, int t) {
  return encode_xpg(xpg, t, Method::OneStep);
}
inline Encoding encode_xpg_twostep(const XpGraph &xpg, int t) {
  return encode_xpg(xpg, t, Method::TwoStep);
}

} // namespace fmp
