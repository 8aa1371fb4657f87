#include "fmp/explain.hpp"

#include "fmp/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace fmp {

namespace {

void check_universe(const ExplainableClassifier &clf, const FeatureSet &x) {
  if (x.universe() != clf.num_features())
    throw Error(ErrorCode::InvalidArgument,
                "feature set over " + std::to_string(x.universe()) +
                    " features, classifier has " + std::to_string(clf.num_features()));
}

void check_length(const Instance &instance, int m) {
  if (instance.num_features() != m)
    throw Error(ErrorCode::InvalidArgument,
                "instance has " + std::to_string(instance.num_features()) +
                    " values, classifier has " + std::to_string(m) + " features");
}

} // namespace

SddClassifier::SddClassifier(Sdd sdd) : sdd_(std::move(sdd)), negated_(negate(sdd_)) {
  if (!is_consistent(sdd_) || !is_consistent(negated_))
    throw Error(ErrorCode::Precondition, "classifier must be non-constant");
}

std::optional<int> SddClassifier::predict(std::span<const int> point) const {
  return evaluate(sdd_, point) ? 1 : 0;
}

void SddClassifier::check_instance(const Instance &instance) const {
  check_length(instance, num_features());
  for (int v : instance.point)
    if (v != 0 && v != 1)
      throw Error(ErrorCode::InvalidArgument, "SDD features are boolean");
  if (instance.prediction != 0 && instance.prediction != 1)
    throw Error(ErrorCode::InvalidArgument, "SDD classes are 0 and 1");
  const int predicted = *predict(instance.point);
  if (predicted != instance.prediction)
    throw Error(ErrorCode::Precondition,
                "classifier predicts " + std::to_string(predicted) +
                    " at the instance, file says " +
                    std::to_string(instance.prediction));
}

bool SddClassifier::is_weak_axp(const Instance &instance, const FeatureSet &x) const {
  Term fixed(num_features());
  for (int f : x.members())
    fixed.assign(f, instance.point[f - 1] != 0);
  // X is a weak AXp iff no completion of the fixed features flips the class.
  return !consistency_under(falsified_by(instance), fixed);
}

XpgClassifier::XpgClassifier(XpGraph graph, std::optional<Instance> instance,
                             Predictor predictor)
    : graph_(std::move(graph)), instance_(std::move(instance)),
      predictor_(std::move(predictor)) {
  if (instance_)
    check_length(*instance_, graph_.num_features());
}

XpgClassifier XpgClassifier::from_obdd(const Obdd &obdd, const Instance &instance) {
  return XpgClassifier(build_xpg(obdd, instance), instance,
                       [obdd](std::span<const int> p) { return obdd.predict(p); });
}

XpgClassifier XpgClassifier::from_dt(const DecisionTree &dt, const Instance &instance) {
  return XpgClassifier(build_xpg(dt, instance), instance,
                       [dt](std::span<const int> p) { return dt.predict(p); });
}

std::optional<int> XpgClassifier::predict(std::span<const int> point) const {
  if (!predictor_)
    return std::nullopt;
  return predictor_(point);
}

void XpgClassifier::check_instance(const Instance &instance) const {
  check_length(instance, num_features());
  if (!instance_)
    return;
  if (instance.point != instance_->point || instance.prediction != instance_->prediction)
    throw Error(ErrorCode::Precondition,
                "explanation graph was built for a different instance");
}

bool XpgClassifier::is_weak_axp(const Instance &instance, const FeatureSet &x) const {
  check_instance(instance);
  std::vector<int> selectors(num_features(), 0);
  for (int f : x.members())
    selectors[f - 1] = 1;
  return evaluate_sigma(graph_, selectors);
}

bool is_weak_axp(const ExplainableClassifier &clf, const Instance &instance,
                 const FeatureSet &x) {
  check_universe(clf, x);
  check_length(instance, clf.num_features());
  return clf.is_weak_axp(instance, x);
}

bool is_weak_cxp(const ExplainableClassifier &clf, const Instance &instance,
                 const FeatureSet &y) {
  check_universe(clf, y);
  return !is_weak_axp(clf, instance, y.complement());
}

FeatureSet find_axp(const ExplainableClassifier &clf, const Instance &instance,
                    const FeatureSet &seed) {
  if (!is_weak_axp(clf, instance, seed))
    throw Error(ErrorCode::Precondition,
                "seed {" + seed.to_string() + "} is not a weak AXp");
  FeatureSet x = seed;
  for (int f : seed.members()) {
    x.erase(f);
    if (!clf.is_weak_axp(instance, x))
      x.insert(f);
  }
  return x;
}

FeatureSet find_cxp(const ExplainableClassifier &clf, const Instance &instance,
                    const FeatureSet &seed) {
  if (!is_weak_cxp(clf, instance, seed))
    throw Error(ErrorCode::Precondition,
                "seed {" + seed.to_string() + "} is not a weak CXp");
  FeatureSet y = seed;
  for (int f : seed.members()) {
    y.erase(f);
    if (!is_weak_cxp(clf, instance, y))
      y.insert(f);
  }
  return y;
}

namespace {

template <typename Pred>
std::vector<FeatureSet> minimal_subsets(int m, Pred holds) {
  if (m > kMaxEnumerationFeatures)
    throw Error(ErrorCode::Limit, "brute-force enumeration is limited to " +
                                      std::to_string(kMaxEnumerationFeatures) +
                                      " features, classifier has " + std::to_string(m));
  const std::uint32_t count = std::uint32_t{1} << m;
  std::vector<std::uint32_t> masks(count);
  for (std::uint32_t i = 0; i < count; ++i)
    masks[i] = i;
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  std::vector<std::uint32_t> found;
  for (std::uint32_t mask : masks) {
    bool pruned = false;
    for (std::uint32_t f : found)
      if ((mask & f) == f) {
        pruned = true;
        break;
      }
    if (pruned)
      continue;
    FeatureSet s(m);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1)
        s.insert(i + 1);
    if (holds(s))
      found.push_back(mask);
  }
  std::vector<FeatureSet> out;
  for (std::uint32_t mask : found) {
    FeatureSet s(m);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1)
        s.insert(i + 1);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<FeatureSet> enumerate_axps_bruteforce(const ExplainableClassifier &clf,
                                                  const Instance &instance) {
  const int m = clf.num_features();
  return minimal_subsets(
      m, [&](const FeatureSet &s) { return is_weak_axp(clf, instance, s); });
}

std::vector<FeatureSet> enumerate_cxps_bruteforce(const ExplainableClassifier &clf,
                                                  const Instance &instance) {
  const int m = clf.num_features();
  return minimal_subsets(
      m, [&](const FeatureSet &s) { return is_weak_cxp(clf, instance, s); });
}

} // namespace fmp
