#include "fmp/error.hpp"
#include "fmp/feature_set.hpp"

#include <doctest.h>

using fmp::FeatureSet;

TEST_CASE("feature set basics") {
  FeatureSet x(4, {3, 1});
  CHECK(x.to_string() == "1,3");
  CHECK(x.size() == 2);
  CHECK(x.contains(1));
  CHECK_FALSE(x.contains(2));
  CHECK(x.complement() == FeatureSet(4, {2, 4}));
  CHECK(x.with(2).to_string() == "1,2,3");
  CHECK(x.without(3).to_string() == "1");
  CHECK(FeatureSet(4, {1}).is_subset_of(x));
  CHECK_FALSE(x.is_subset_of(FeatureSet(4, {1})));
  CHECK(FeatureSet::all(3).to_string() == "1,2,3");
  CHECK(FeatureSet(3).empty());
  CHECK(FeatureSet(3).to_string().empty());
}

TEST_CASE("feature set rejects features outside the universe") {
  FeatureSet x(3);
  CHECK_THROWS_AS(x.insert(0), fmp::Error);
  CHECK_THROWS_AS(x.insert(4), fmp::Error);
  CHECK_THROWS_AS(FeatureSet(2, {3}), fmp::Error);
}

TEST_CASE("feature set ordering is by member list") {
  CHECK(FeatureSet(4, {1, 3}) < FeatureSet(4, {2}));
  CHECK(FeatureSet(4, {1}) < FeatureSet(4, {1, 2}));
}
