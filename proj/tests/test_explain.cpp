#include "fmp/error.hpp"
#include "fmp/explain.hpp"
#include "fmp/generate.hpp"
#include "models.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <memory>
#include <random>

using namespace fmp;

namespace {

const std::string kFixtures = FMP_FIXTURES;

Instance sample() { return {{0, 1, 0, 1}, 0}; }

SddClassifier sample_sdd() {
  auto vt = std::make_shared<const Vtree>(
      Vtree::parse_string(oracle::slurp(kFixtures + "/sample.vtree")));
  return SddClassifier(Sdd::parse_string(oracle::slurp(kFixtures + "/sample.sdd"), vt));
}

XpgClassifier sample_xpg() {
  return XpgClassifier(XpGraph::parse_string(oracle::slurp(kFixtures + "/sample.xpg")),
                       std::nullopt);
}

FeatureSet fs(int m, oracle::Mask x) { return FeatureSet(m, oracle::members(x)); }

oracle::Mask mask(const FeatureSet &x) {
  oracle::Mask out = 0;
  for (int f : x.members())
    out |= oracle::Mask{1} << (f - 1);
  return out;
}

std::vector<FeatureSet> sets(int m, std::vector<oracle::Mask> masks) {
  std::vector<FeatureSet> out;
  for (auto x : masks)
    out.push_back(fs(m, x));
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("weak AXp and weak CXp on the sample classifier") {
  const SddClassifier sdd = sample_sdd();
  const XpgClassifier xpg = sample_xpg();
  for (const ExplainableClassifier *clf :
       std::initializer_list<const ExplainableClassifier *>{&sdd, &xpg}) {
    CHECK(is_weak_axp(*clf, sample(), FeatureSet(4, {1, 3})));
    CHECK(is_weak_axp(*clf, sample(), FeatureSet::all(4)));
    CHECK_FALSE(is_weak_axp(*clf, sample(), FeatureSet(4)));
    CHECK_FALSE(is_weak_axp(*clf, sample(), FeatureSet(4, {1, 2, 4})));
    CHECK(is_weak_cxp(*clf, sample(), FeatureSet(4, {1})));
    CHECK_FALSE(is_weak_cxp(*clf, sample(), FeatureSet(4)));
    CHECK(is_weak_cxp(*clf, sample(), FeatureSet::all(4)));
    CHECK_THROWS_AS(is_weak_axp(*clf, sample(), FeatureSet(3)), Error);
  }
}

TEST_CASE("AXp and CXp extraction on the sample classifier") {
  const SddClassifier sdd = sample_sdd();
  const XpgClassifier xpg = sample_xpg();
  CHECK(find_axp(sdd, sample(), FeatureSet::all(4)) == FeatureSet(4, {1, 3}));
  CHECK(find_axp(sdd, sample(), FeatureSet(4, {1, 3})) == FeatureSet(4, {1, 3}));
  CHECK(find_axp(xpg, sample(), FeatureSet(4, {1, 2, 3})) == FeatureSet(4, {1, 3}));
  CHECK(find_cxp(sdd, sample(), FeatureSet::all(4)) == FeatureSet(4, {3}));
  CHECK(find_cxp(sdd, sample(), FeatureSet(4, {1, 2})) == FeatureSet(4, {1}));
  CHECK(find_cxp(sdd, sample(), FeatureSet(4, {3})) == FeatureSet(4, {3}));
  CHECK(find_cxp(xpg, sample(), FeatureSet::all(4)) == FeatureSet(4, {3}));
  CHECK_THROWS_AS(find_cxp(sdd, sample(), FeatureSet(4)), Error);
  CHECK_THROWS_AS(find_axp(sdd, sample(), FeatureSet(4, {2})), Error);
}

TEST_CASE("enumeration on the sample classifier") {
  const SddClassifier sdd = sample_sdd();
  const XpgClassifier xpg = sample_xpg();
  const auto table = oracle::Table::of(4, oracle::kappa);
  const auto v = oracle::mask_of(sample().point);
  CHECK(enumerate_axps_bruteforce(sdd, sample()) == sets(4, oracle::axps(table, v, 0)));
  CHECK(enumerate_cxps_bruteforce(sdd, sample()) == sets(4, oracle::cxps(table, v, 0)));
  CHECK(enumerate_axps_bruteforce(sdd, sample()) == std::vector<FeatureSet>{FeatureSet(4, {1, 3})});
  CHECK(enumerate_cxps_bruteforce(sdd, sample()) ==
        std::vector<FeatureSet>{FeatureSet(4, {1}), FeatureSet(4, {3})});
  CHECK(enumerate_axps_bruteforce(xpg, sample()) == enumerate_axps_bruteforce(sdd, sample()));
  CHECK(enumerate_cxps_bruteforce(xpg, sample()) == enumerate_cxps_bruteforce(sdd, sample()));
  CHECK(oracle::mhs(4, {0b0001, 0b0100}) == std::vector<oracle::Mask>{0b0101});
}

TEST_CASE("single relevant feature") {
  auto vt = std::make_shared<const Vtree>(Vtree::parse_string("vtree 1\nL 0 1\n"));
  const SddClassifier clf(Sdd::parse_string("sdd 1\nL 0 0 1\n", vt));
  const Instance inst{{1}, 1};
  CHECK(enumerate_axps_bruteforce(clf, inst) == std::vector<FeatureSet>{FeatureSet(1, {1})});
  CHECK(enumerate_cxps_bruteforce(clf, inst) == std::vector<FeatureSet>{FeatureSet(1, {1})});
}

TEST_CASE("irrelevant feature never appears in a CXp") {
  // Feature 2 is ignored by x1.
  auto vt = std::make_shared<const Vtree>(Vtree::balanced(2));
  const SddClassifier clf(compile_truth_table(vt, {false, true, false, true}));
  for (const auto &y : enumerate_cxps_bruteforce(clf, Instance{{1, 0}, 1}))
    CHECK_FALSE(y.contains(2));
}

TEST_CASE("constant SDD classifiers are rejected") {
  auto vt = std::make_shared<const Vtree>(Vtree::balanced(2));
  CHECK_THROWS_AS(SddClassifier(compile_truth_table(vt, {true, true, true, true})), Error);
}

TEST_CASE("enumeration guard") {
  auto vt = std::make_shared<const Vtree>(Vtree::balanced(17));
  SddBuilder b(vt);
  const SddClassifier clf(std::move(b).finish(b.literal(1)));
  try {
    enumerate_axps_bruteforce(clf, Instance{std::vector<int>(17, 1), 1});
    FAIL("no error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Limit);
  }
}

TEST_CASE("SDD instance checks") {
  const SddClassifier sdd = sample_sdd();
  CHECK_THROWS_AS(sdd.check_instance(Instance{{0, 1, 0, 1}, 1}), Error);
  CHECK_THROWS_AS(sdd.check_instance(Instance{{0, 2, 0, 1}, 0}), Error);
  CHECK_NOTHROW(sdd.check_instance(sample()));
}

TEST_CASE("explanation properties on random classifiers") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 40; ++round) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const Obdd obdd = models::random_model(rng, m, 2);
    const SddClassifier sdd(shannon_sdd(obdd));
    const auto table = oracle::Table::of(m, [&](const std::vector<int> &x) {
      return obdd.predict(x);
    });
    Instance inst;
    for (int f = 0; f < m; ++f)
      inst.point.push_back(static_cast<int>(rng() & 1));
    inst.prediction = obdd.predict(inst.point);
    const XpgClassifier xpg = XpgClassifier::from_obdd(obdd, inst);
    const auto v = oracle::mask_of(inst.point);
    const oracle::Mask full = (oracle::Mask{1} << m) - 1;

    for (oracle::Mask x = 0; x <= full; ++x) {
      const bool weak = is_weak_axp(sdd, inst, fs(m, x));
      REQUIRE(weak == oracle::weak_axp(table, v, inst.prediction, x));
      REQUIRE(is_weak_axp(xpg, inst, fs(m, x)) == weak);
      REQUIRE(is_weak_cxp(sdd, inst, fs(m, x)) == !is_weak_axp(sdd, inst, fs(m, full & ~x)));
      // Monotonicity along one added feature.
      for (int f = 0; f < m; ++f)
        if (weak)
          REQUIRE(is_weak_axp(sdd, inst, fs(m, x | (oracle::Mask{1} << f))));
    }

    const auto axps = enumerate_axps_bruteforce(sdd, inst);
    const auto cxps = enumerate_cxps_bruteforce(xpg, inst);
    REQUIRE(axps == sets(m, oracle::axps(table, v, inst.prediction)));
    REQUIRE(cxps == sets(m, oracle::cxps(table, v, inst.prediction)));
    std::vector<oracle::Mask> am, cm;
    for (const auto &a : axps)
      am.push_back(mask(a));
    for (const auto &c : cxps)
      cm.push_back(mask(c));
    REQUIRE(sets(m, oracle::mhs(m, cm)) == axps);
    REQUIRE(sets(m, oracle::mhs(m, am)) == cxps);

    const FeatureSet a = find_axp(sdd, inst, FeatureSet::all(m));
    REQUIRE(is_weak_axp(sdd, inst, a));
    for (int f : a.members())
      REQUIRE_FALSE(is_weak_axp(sdd, inst, a.without(f)));
    REQUIRE(find_axp(xpg, inst, FeatureSet::all(m)) == a);
    const FeatureSet c = find_cxp(xpg, inst, FeatureSet::all(m));
    REQUIRE(is_weak_cxp(xpg, inst, c));
    for (int f : c.members())
      REQUIRE_FALSE(is_weak_cxp(xpg, inst, c.without(f)));
  }
}
