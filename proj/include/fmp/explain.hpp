#pragma once

#include "fmp/decision_tree.hpp"
#include "fmp/feature_set.hpp"
#include "fmp/instance.hpp"
#include "fmp/obdd.hpp"
#include "fmp/sdd.hpp"
#include "fmp/xpg.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fmp {

/// Uniform surface over the classifiers we can explain.
///
/// Implementations are immutable after construction and may be shared across
/// threads; every query keeps its scratch state on the stack.
class ExplainableClassifier {
public:
  virtual ~ExplainableClassifier() = default;

  virtual int num_features() const = 0;
  /// Node count of the underlying diagram.
  virtual int num_nodes() const = 0;
  /// Class at a full point, or nullopt when the adapter only knows the
  /// instance-specialised graph (an XpG loaded on its own).
  virtual std::optional<int> predict(std::span<const int> point) const = 0;
  /// Does fixing the features in X to their values in the instance force the
  /// instance's prediction?
  virtual bool is_weak_axp(const Instance &instance, const FeatureSet &x) const = 0;
  /// Throws unless the instance fits this classifier and carries its
  /// prediction.
  virtual void check_instance(const Instance &instance) const = 0;
};

/// Boolean classifier given as an SDD; class 1 is ⊤, class 0 is ⊥.
class SddClassifier final : public ExplainableClassifier {
public:
  /// Rejects constant diagrams. Negates once up front.
  explicit SddClassifier(Sdd sdd);

  int num_features() const override { return sdd_.num_vars(); }
  int num_nodes() const override { return sdd_.size(); }
  std::optional<int> predict(std::span<const int> point) const override;
  bool is_weak_axp(const Instance &instance, const FeatureSet &x) const override;
  void check_instance(const Instance &instance) const override;

  const Sdd &diagram() const { return sdd_; }
  const Sdd &negated() const { return negated_; }
  /// The diagram that is ⊥ at the instance: the original for class 0, the
  /// negation for class 1.
  const Sdd &falsified_by(const Instance &instance) const {
    return instance.prediction == 0 ? sdd_ : negated_;
  }

private:
  Sdd sdd_;
  Sdd negated_;
};

/// Explanation graph bound to the instance it was specialised for.
class XpgClassifier final : public ExplainableClassifier {
public:
  using Predictor = std::function<int(std::span<const int>)>;

  /// `instance` is nullopt for graphs read from an .xpg file, whose source
  /// classifier and instance are unknown.
  XpgClassifier(XpGraph graph, std::optional<Instance> instance,
                Predictor predictor = {});

  static XpgClassifier from_obdd(const Obdd &obdd, const Instance &instance);
  static XpgClassifier from_dt(const DecisionTree &dt, const Instance &instance);

  int num_features() const override { return graph_.num_features(); }
  int num_nodes() const override { return graph_.size(); }
  std::optional<int> predict(std::span<const int> point) const override;
  bool is_weak_axp(const Instance &instance, const FeatureSet &x) const override;
  void check_instance(const Instance &instance) const override;

  const XpGraph &graph() const { return graph_; }
  const std::optional<Instance> &bound_instance() const { return instance_; }

private:
  XpGraph graph_;
  std::optional<Instance> instance_;
  Predictor predictor_;
};

bool is_weak_axp(const ExplainableClassifier &clf, const Instance &instance,
                 const FeatureSet &x);
/// ¬WeakAXp(F \ Y).
bool is_weak_cxp(const ExplainableClassifier &clf, const Instance &instance,
                 const FeatureSet &y);

/// Deletion-based extraction: scans the seed in ascending feature order and
/// drops each feature whose removal keeps the set a weak AXp (resp. CXp).
FeatureSet find_axp(const ExplainableClassifier &clf, const Instance &instance,
                    const FeatureSet &seed);
FeatureSet find_cxp(const ExplainableClassifier &clf, const Instance &instance,
                    const FeatureSet &seed);

inline constexpr int kMaxEnumerationFeatures = 16;

/// Every subset-minimal weak AXp (resp. CXp), by increasing cardinality with
/// supersets of earlier finds pruned. Sorted. m <= 16.
std::vector<FeatureSet> enumerate_axps_bruteforce(const ExplainableClassifier &clf,
                                                  const Instance &instance);
std::vector<FeatureSet> enumerate_cxps_bruteforce(const ExplainableClassifier &clf,
                                                  const Instance &instance);

} // namespace fmp
