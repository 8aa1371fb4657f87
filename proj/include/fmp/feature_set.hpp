#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace fmp {

/// A subset of the features {1..m}. Features are 1-based everywhere.
class FeatureSet {
public:
  FeatureSet() = default;
  explicit FeatureSet(int num_features);
  FeatureSet(int num_features, std::initializer_list<int> members);
  FeatureSet(int num_features, const std::vector<int> &members);

  static FeatureSet all(int num_features);

  int universe() const { return static_cast<int>(bits_.size()); }
  bool contains(int feature) const;
  void insert(int feature);
  void erase(int feature);

  FeatureSet with(int feature) const;
  FeatureSet without(int feature) const;
  FeatureSet complement() const;
  bool is_subset_of(const FeatureSet &other) const;

  int size() const;
  bool empty() const { return size() == 0; }

  /// Members in ascending order.
  std::vector<int> members() const;
  /// Comma-separated ascending members, e.g. "1,3"; empty string for {}.
  std::string to_string() const;

  friend bool operator==(const FeatureSet &a, const FeatureSet &b) {
    return a.bits_ == b.bits_;
  }
  /// Orders by universe, then by member list (lexicographic).
  friend std::strong_ordering operator<=>(const FeatureSet &a,
                                          const FeatureSet &b);

private:
  void check(int feature) const;

  std::vector<char> bits_;
};

} // namespace fmp
