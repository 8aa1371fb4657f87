#include "fmp/decision_tree.hpp"
#include "fmp/error.hpp"
#include "fmp/generate.hpp"
#include "fmp/obdd.hpp"
#include "fmp/xpg.hpp"
#include "models.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

using namespace fmp;

namespace {

const std::string kFixtures = FMP_FIXTURES;

Instance sample() { return {{0, 1, 0, 1}, 0}; }
Obdd sample_obdd() { return Obdd::parse_string(oracle::slurp(kFixtures + "/sample.obdd")); }
XpGraph sample_xpg() { return XpGraph::parse_string(oracle::slurp(kFixtures + "/sample.xpg")); }

std::vector<int> bits(oracle::Mask s, int m) {
  std::vector<int> out(m);
  for (int i = 0; i < m; ++i)
    out[i] = (s >> i) & 1;
  return out;
}

using EdgeKey = std::tuple<int, int, bool>;

std::set<EdgeKey> edge_set(const XpGraph &g) {
  std::set<EdgeKey> out;
  for (const auto &e : g.edges())
    out.insert({g.node(e.from).id, g.node(e.to).id, e.label});
  return out;
}

std::set<std::tuple<int, int, int>> node_set(const XpGraph &g) {
  std::set<std::tuple<int, int, int>> out;
  for (int i = 0; i < g.size(); ++i)
    out.insert({g.node(i).id, g.node(i).var, g.node(i).label});
  return out;
}

} // namespace

TEST_CASE("OBDD fixture computes the sample classifier") {
  const Obdd obdd = sample_obdd();
  CHECK(obdd.num_vars() == 4);
  for (oracle::Mask p = 0; p < 16; ++p)
    CHECK(obdd.predict(bits(p, 4)) == oracle::kappa(bits(p, 4)));
}

TEST_CASE("explanation graph built from the OBDD matches the fixture") {
  const XpGraph built = build_xpg(sample_obdd(), sample());
  const XpGraph fixture = sample_xpg();
  CHECK(node_set(built) == node_set(fixture));
  CHECK(edge_set(built) == edge_set(fixture));
  CHECK(built.node(built.root()).id == 1);
  // Root on P: its 1-edge goes to M, its 0-edge to Y.
  CHECK(edge_set(built).count({1, 2, true}) == 1);
  CHECK(edge_set(built).count({1, 3, false}) == 1);
}

TEST_CASE("the all-1 path ends at the single 1-terminal") {
  const XpGraph g = build_xpg(sample_obdd(), sample());
  int v = g.root();
  while (!g.node(v).is_terminal()) {
    int next = -1;
    for (int e : g.out_edges(v))
      if (g.edges()[e].label)
        next = g.edges()[e].to;
    REQUIRE(next >= 0);
    v = next;
  }
  CHECK(g.node(v).label == 1);
}

TEST_CASE("constant OBDD cannot be turned into an explanation graph") {
  const Obdd constant = Obdd::parse_string("obdd 1 1\nT 0 0\n");
  CHECK_THROWS_AS(build_xpg(constant, Instance{{0}, 0}), Error);
}

TEST_CASE("a mispredicted instance is rejected") {
  CHECK_THROWS_AS(build_xpg(sample_obdd(), Instance{{0, 1, 0, 1}, 1}), Error);
}

TEST_CASE("sigma on the sample classifier") {
  const XpGraph g = sample_xpg();
  CHECK(evaluate_sigma(g, std::vector<int>{1, 1, 1, 1}));
  CHECK_FALSE(evaluate_sigma(g, std::vector<int>{0, 0, 0, 0}));
  CHECK(evaluate_sigma(g, std::vector<int>{1, 0, 1, 0}));
  CHECK_FALSE(evaluate_sigma(g, std::vector<int>{1, 1, 0, 1}));
  CHECK_THROWS_AS(evaluate_sigma(g, std::vector<int>{1, 1}), Error);
}

TEST_CASE("explanation graph serialisation round-trips") {
  const std::string text = sample_xpg().serialize();
  CHECK(XpGraph::parse_string(text).serialize() == text);
  CHECK(evaluate_sigma(XpGraph::parse_string(text), std::vector<int>{1, 1, 1, 1}));
}

TEST_CASE("explanation graph structural errors") {
  auto issue = [](const std::string &text) {
    try {
      XpGraph::parse_string(text);
    } catch (const ParseError &e) {
      return std::make_pair(e.issue(), std::string(e.what()));
    }
    FAIL("accepted");
    return std::make_pair(ParseIssue::Malformed, std::string());
  };
  const auto roots = issue("xpg 1 4\nN 1 1\nN 2 1\nT 3 1\nT 4 0\nE 1 3 1\nE 2 4 1\n");
  CHECK(roots.first == ParseIssue::MultipleRoots);
  CHECK(roots.second.find("multiple roots") != std::string::npos);
  CHECK(issue("xpg 1 3\nN 1 1\nT 2 1\nT 3 1\nE 1 2 1\nE 1 3 1\n").first ==
        ParseIssue::MultipleOneEdges);
  CHECK(issue("xpg 1 3\nN 1 1\nT 2 1\nT 3 0\nE 1 2 0\nE 1 3 1\n").first ==
        ParseIssue::NoOneTerminal);
  CHECK(issue("xpg 1 2\nN 1 1\nT 2 1\nE 1 2 1\nE 1 9 0\n").first ==
        ParseIssue::DanglingReference);
}

TEST_CASE("smallest decision tree") {
  const DecisionTree dt =
      DecisionTree::parse_string("dt 1\nN 1 1\nT 2 0\nT 3 1\nE 1 2 0\nE 1 3 1\n");
  const XpGraph g = build_xpg(dt, Instance{{0}, 0});
  CHECK(g.num_features() == 1);
  CHECK(g.node(g.root()).var == 1);
  CHECK(edge_set(g) == std::set<EdgeKey>{{1, 2, true}, {1, 3, false}});
  CHECK(node_set(g).count({2, 0, 1}) == 1);
  CHECK(node_set(g).count({3, 0, 0}) == 1);
}

TEST_CASE("decision-tree graph agrees with the OBDD graph on every selector vector") {
  const DecisionTree dt = DecisionTree::parse_string(oracle::slurp(kFixtures + "/sample.dt"));
  const XpGraph from_dt = build_xpg(dt, sample());
  const XpGraph from_obdd = build_xpg(sample_obdd(), sample());
  for (oracle::Mask s = 0; s < 16; ++s)
    CHECK(evaluate_sigma(from_dt, bits(s, 4)) == evaluate_sigma(from_obdd, bits(s, 4)));
}

TEST_CASE("ternary-domain decision tree") {
  const DecisionTree dt = DecisionTree::parse_string(oracle::slurp(kFixtures + "/ternary.dt"));
  const Instance inst = dt.bind(parse_instance_string(oracle::slurp(kFixtures + "/ternary.inst")));
  CHECK(inst.point == std::vector<int>{1, 1});
  const XpGraph g = build_xpg(dt, inst);
  CHECK(evaluate_sigma(g, std::vector<int>{1, 1}));
  CHECK_FALSE(evaluate_sigma(g, std::vector<int>{0, 1}));
  CHECK_FALSE(evaluate_sigma(g, std::vector<int>{1, 0}));
}

TEST_CASE("decision-tree parse errors") {
  auto issue = [](const std::string &text) {
    try {
      DecisionTree::parse_string(text);
    } catch (const ParseError &e) {
      return e.issue();
    }
    FAIL("accepted");
    return ParseIssue::Malformed;
  };
  CHECK(issue("dt 1\nN 1 1\nT 2 0\nT 3 1\nE 1 2 0\nE 1 3 0\n") == ParseIssue::NotAPartition);
  CHECK(issue("dt 1\nN 1 1\nT 2 0\nE 1 2 0\nE 1 2 1\n") == ParseIssue::NotATree);
  CHECK(issue("dt 1\nN 1 1\nT 2 0\nT 3 1\nE 1 2 0\nE 1 3 2\n") == ParseIssue::BadValue);
}

TEST_CASE("sigma semantics and monotonicity on random OBDDs") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const Obdd obdd = models::random_model(rng, m, 2);
    const auto table = oracle::Table::of(m, [&](const std::vector<int> &x) {
      return obdd.predict(x);
    });
    for (int i = 0; i < 3; ++i) {
      Instance inst;
      for (int f = 0; f < m; ++f)
        inst.point.push_back(static_cast<int>(rng() & 1));
      inst.prediction = obdd.predict(inst.point);
      const XpGraph g = build_xpg(obdd, inst);
      const oracle::Mask v = oracle::mask_of(inst.point);
      for (oracle::Mask s = 0; s < (oracle::Mask{1} << m); ++s) {
        const bool sigma = evaluate_sigma(g, bits(s, m));
        REQUIRE(sigma == oracle::weak_axp(table, v, inst.prediction, s));
        for (int f = 0; f < m; ++f)
          if (!((s >> f) & 1) && sigma)
            REQUIRE(evaluate_sigma(g, bits(s | (oracle::Mask{1} << f), m)));
      }
    }
  }
}
