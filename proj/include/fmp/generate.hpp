#pragma once

#include "fmp/instance.hpp"
#include "fmp/membership.hpp"
#include "fmp/obdd.hpp"
#include "fmp/sdd.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fmp {

enum class ClassifierKind { Obdd, ShannonSdd };

ClassifierKind parse_classifier_kind(const std::string &text);

/// Reduced OBDD over a random variable order with `nodes` decision nodes
/// (plus the two terminals, classes 0 and 1). Every node is reachable and
/// no two nodes share (var, lo, hi), so the function is never constant.
/// Deterministic in `seed`. With fewer nodes than features only the first
/// `nodes` variables of the order are tested.
Obdd random_obdd(int num_vars, int nodes, std::uint64_t seed);

/// Variables in the order an OBDD tests them, then the untested ones
/// ascending.
std::vector<int> variable_order(const Obdd &obdd);

/// Shannon-style SDD for a boolean OBDD along the right-linear vtree of
/// `variable_order(obdd)`: each decision node has elements (x, hi) and
/// (¬x, lo).
Sdd shannon_sdd(const Obdd &obdd);

/// A uniformly random boolean point labelled with the given prediction.
template <typename Predict>
Instance random_instance(int num_vars, std::mt19937_64 &rng, Predict predict) {
  Instance inst;
  inst.point.resize(num_vars);
  for (auto &v : inst.point)
    v = static_cast<int>(rng() & 1);
  inst.prediction = predict(inst.point);
  return inst;
}

struct BenchConfig {
  ClassifierKind kind = ClassifierKind::Obdd;
  int num_features = 8;
  int num_nodes = 20;
  int classifiers = 1;
  int queries = 100;
  std::uint64_t seed = 1;
  double time_limit_s = 0;
  Backend backend;
};

/// Random classifiers with uniformly drawn instances and targets; two items
/// (one-step, two-step) per classifier sharing the same queries. OBDDs are
/// queried through explanation graphs, Shannon SDDs directly. An SDD item
/// whose queries include class-1 instances gets the suffix `:neg=<count>`.
std::vector<BatchItem> make_bench_items(const BenchConfig &spec);

} // namespace fmp
