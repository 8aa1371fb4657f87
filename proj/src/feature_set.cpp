#include "fmp/feature_set.hpp"

#include "fmp/error.hpp"

#include <algorithm>

namespace fmp {

FeatureSet::FeatureSet(int num_features) {
  if (num_features < 0)
    throw Error(ErrorCode::InvalidArgument, "negative feature count");
  bits_.assign(static_cast<size_t>(num_features), 0);
}

FeatureSet::FeatureSet(int num_features, std::initializer_list<int> members)
    : FeatureSet(num_features) {
  for (int f : members)
    insert(f);
}

FeatureSet::FeatureSet(int num_features, const std::vector<int> &members)
    : FeatureSet(num_features) {
  for (int f : members)
    insert(f);
}

FeatureSet FeatureSet::all(int num_features) {
  FeatureSet s(num_features);
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  return s;
}

void FeatureSet::check(int feature) const {
  if (feature < 1 || feature > universe())
    throw Error(ErrorCode::InvalidArgument,
                "feature " + std::to_string(feature) + " outside 1.." +
                    std::to_string(universe()));
}

bool FeatureSet::contains(int feature) const {
  check(feature);
  return bits_[feature - 1] != 0;
}

void FeatureSet::insert(int feature) {
  check(feature);
  bits_[feature - 1] = 1;
}

void FeatureSet::erase(int feature) {
  check(feature);
  bits_[feature - 1] = 0;
}

FeatureSet FeatureSet::with(int feature) const {
  FeatureSet s = *this;
  s.insert(feature);
  return s;
}

FeatureSet FeatureSet::without(int feature) const {
  FeatureSet s = *this;
  s.erase(feature);
  return s;
}

FeatureSet FeatureSet::complement() const {
  FeatureSet s = *this;
  for (auto &b : s.bits_)
    b = b ? 0 : 1;
  return s;
}

bool FeatureSet::is_subset_of(const FeatureSet &other) const {
  if (universe() != other.universe())
    throw Error(ErrorCode::InvalidArgument, "feature sets over different universes");
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i])
      return false;
  return true;
}

int FeatureSet::size() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<int> FeatureSet::members() const {
  std::vector<int> out;
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i])
      out.push_back(static_cast<int>(i) + 1);
  return out;
}

std::string FeatureSet::to_string() const {
  std::string out;
  for (int f : members()) {
    if (!out.empty())
      out += ',';
    out += std::to_string(f);
  }
  return out;
}

std::strong_ordering operator<=>(const FeatureSet &a, const FeatureSet &b) {
  if (auto c = a.universe() <=> b.universe(); c != 0)
    return c;
  auto ma = a.members();
  auto mb = b.members();
  return std::lexicographical_compare_three_way(ma.begin(), ma.end(),
                                                mb.begin(), mb.end());
}

} // namespace fmp
