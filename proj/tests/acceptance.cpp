// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include "fmp/encode.hpp"
#include "fmp/error.hpp"
#include "fmp/explain.hpp"
#include "fmp/generate.hpp"
#include "fmp/membership.hpp"
#include "models.hpp"
#include "oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fmp;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = FMP_FIXTURES;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Report {
  bool all = true;
  void line(int id, bool ok, const std::string &detail) {
    std::printf("%s %d %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    all = all && ok;
  }
};

oracle::Mask mask(const FeatureSet &x) {
  oracle::Mask out = 0;
  for (int f : x.members())
    out |= oracle::Mask{1} << (f - 1);
  return out;
}

std::vector<oracle::Mask> masks(const std::vector<FeatureSet> &sets) {
  std::vector<oracle::Mask> out;
  for (const auto &s : sets)
    out.push_back(mask(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<oracle::Mask> sorted(std::vector<oracle::Mask> v) {
  std::sort(v.begin(), v.end());
  return v;
}

FmpQuery make_query(std::shared_ptr<const ExplainableClassifier> clf, const Instance &inst,
                    int t, Method method) {
  FmpQuery q;
  q.classifier = std::move(clf);
  q.instance = inst;
  q.target = t;
  q.method = method;
  return q;
}

// ---------------------------------------------------------------------------

void sample_classifier(Report &rep) {
  const auto start = Clock::now();
  auto vt = std::make_shared<const Vtree>(
      Vtree::parse_string(oracle::slurp(kFixtures + "/sample.vtree")));
  auto sdd = std::make_shared<SddClassifier>(
      Sdd::parse_string(oracle::slurp(kFixtures + "/sample.sdd"), vt));
  auto xpg = std::make_shared<XpgClassifier>(
      XpGraph::parse_string(oracle::slurp(kFixtures + "/sample.xpg")), std::nullopt);
  const Instance sample{{0, 1, 0, 1}, 0};
  // P=1 Y=2 M=3 W=4.
  const bool expected[] = {true, false, true, false};
  bool ok = true;
  std::string detail;
  for (auto clf : {std::shared_ptr<const ExplainableClassifier>(sdd),
                   std::shared_ptr<const ExplainableClassifier>(xpg)})
    for (Method method : {Method::OneStep, Method::TwoStep})
      for (int t = 1; t <= 4; ++t) {
        const auto out = decide_membership(make_query(clf, sample, t, method));
        const bool yes = out.answer == Answer::Yes;
        if (yes != expected[t - 1])
          ok = false;
        if (t == 3 && (!out.witness || *out.witness != FeatureSet(4, {1, 3})))
          ok = false;
      }
  const double s = since(start);
  ok = ok && s < 1.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "sample classifier: 4 routes, M=Yes {P,M}, P=Yes, Y=No, W=No (%.3f s)", s);
  rep.line(1, ok, buf);
}

struct SuiteCounts {
  long queries = 0;
  long mismatches = 0;
  long witness_violations = 0;
  long seed_checks = 0;
  long seed_violations = 0;
  int classifiers = 0;
  double seconds = 0;
};

SuiteCounts oracle_suite() {
  SuiteCounts c;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 240; ++k) {
    const bool sdd_kind = k % 2 == 1;
    const int m = 3 + static_cast<int>(rng() % 6);
    const Obdd obdd = models::random_model(rng, m);
    auto predict = [&](const std::vector<int> &x) { return obdd.predict(x); };
    const auto table = oracle::Table::of(m, predict);
    std::shared_ptr<const ExplainableClassifier> sdd;
    if (sdd_kind)
      sdd = std::make_shared<SddClassifier>(shannon_sdd(obdd));
    ++c.classifiers;
    for (int i = 0; i < 5; ++i) {
      const Instance inst = random_instance(m, rng, predict);
      const auto v = oracle::mask_of(inst.point);
      const auto axps = oracle::axps(table, v, inst.prediction);
      auto clf = sdd ? sdd
                     : std::shared_ptr<const ExplainableClassifier>(
                           std::make_shared<XpgClassifier>(XpgClassifier::from_obdd(obdd, inst)));
      for (int t = 1; t <= m; ++t)
        for (Method method : {Method::OneStep, Method::TwoStep}) {
          ++c.queries;
          FmpOutcome out;
          try {
            out = decide_membership(make_query(clf, inst, t, method));
          } catch (const Error &e) {
            // The library refuses to return an unverified witness or seed.
            ++c.mismatches;
            ++c.witness_violations;
            if (method == Method::TwoStep)
              ++c.seed_violations;
            continue;
          }
          const bool yes = out.answer == Answer::Yes;
          if (yes != oracle::member(axps, t))
            ++c.mismatches;
          if (yes) {
            const auto w = mask(*out.witness);
            bool good = oracle::weak_axp(table, v, inst.prediction, w) && ((w >> (t - 1)) & 1);
            for (int f = 0; f < m && good; ++f)
              if ((w >> f) & 1)
                good = !oracle::weak_axp(table, v, inst.prediction, w & ~(oracle::Mask{1} << f));
            c.witness_violations += !good;
          }
          if (method == Method::TwoStep && yes) {
            ++c.seed_checks;
            const auto x = mask(*out.seed);
            const oracle::Mask tb = oracle::Mask{1} << (t - 1);
            if (!oracle::weak_axp(table, v, inst.prediction, x) ||
                oracle::weak_axp(table, v, inst.prediction, x & ~tb))
              ++c.seed_violations;
          }
        }
    }
  }
  c.seconds = since(start);
  return c;
}

void duality(Report &rep) {
  std::mt19937_64 rng(77);
  long checks = 0, violations = 0;
  for (int k = 0; k < 50; ++k) {
    const int m = 3 + static_cast<int>(rng() % 6);
    const Obdd obdd = models::random_model(rng, m);
    auto predict = [&](const std::vector<int> &x) { return obdd.predict(x); };
    const Instance inst = random_instance(m, rng, predict);
    const SddClassifier sdd(shannon_sdd(obdd));
    const XpgClassifier xpg = XpgClassifier::from_obdd(obdd, inst);
    for (const ExplainableClassifier *clf :
         std::initializer_list<const ExplainableClassifier *>{&sdd, &xpg}) {
      const oracle::Mask full = (oracle::Mask{1} << m) - 1;
      for (oracle::Mask y = 0; y <= full; ++y) {
        ++checks;
        const FeatureSet ys(m, oracle::members(y));
        violations += is_weak_cxp(*clf, inst, ys) != !is_weak_axp(*clf, inst, ys.complement());
      }
      const auto a = masks(enumerate_axps_bruteforce(*clf, inst));
      const auto c = masks(enumerate_cxps_bruteforce(*clf, inst));
      checks += 3;
      violations += sorted(oracle::mhs(m, c)) != a;
      violations += sorted(oracle::mhs(m, a)) != c;
      bool symmetric = true;
      for (int f = 1; f <= m; ++f)
        symmetric = symmetric && oracle::member(a, f) == oracle::member(c, f);
      violations += !symmetric;
    }
  }
  rep.line(5, violations == 0,
           "duality: " + std::to_string(checks) + " checks on 50 classifiers, " +
               std::to_string(violations) + " violations");
}

void encoding_size(Report &rep) {
  std::mt19937_64 rng(40);
  bool ok = true;
  double lo = 1e9, hi = 0;
  int samples = 0;
  for (int k = 0; k < 10; ++k) {
    const int nodes = 300 + static_cast<int>(rng() % 301);
    const Obdd obdd = random_obdd(40, nodes, rng());
    const Instance inst = random_instance(40, rng, [&](const std::vector<int> &x) {
      return obdd.predict(x);
    });
    const XpGraph g = build_xpg(obdd, inst);
    const int t = 1 + static_cast<int>(rng() % 40);
    const double one = static_cast<double>(encode_xpg_onestep(g, t).cnf.clauses.size());
    const double two = static_cast<double>(encode_xpg_twostep(g, t).cnf.clauses.size());
    const double ratio = one / two;
    ok = ok && ratio >= 5 && g.size() >= 300;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ++samples;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "encoding size: m=40, %d XpGs with >=300 nodes, one/two-step clause ratio %.1f..%.1f",
                samples, lo, hi);
  rep.line(6, ok, buf);
}

std::vector<int> point_of(oracle::Mask p, int m) {
  std::vector<int> x(m);
  for (int i = 0; i < m; ++i)
    x[i] = (p >> i) & 1;
  return x;
}

// Exhaustive semantics of negation, conditioning and consistency.
long check_algebra(const Sdd &sdd, std::mt19937_64 &rng) {
  const int m = sdd.num_vars();
  long bad = 0;
  const Sdd neg = negate(sdd);
  std::vector<char> val(std::size_t{1} << m);
  bool any = false;
  for (oracle::Mask p = 0; p < val.size(); ++p) {
    val[p] = evaluate(sdd, point_of(p, m));
    any |= val[p] != 0;
    bad += evaluate(neg, point_of(p, m)) == (val[p] != 0);
  }
  bad += is_consistent(sdd) != any;
  bad += is_consistent(neg) != std::any_of(val.begin(), val.end(), [](char v) { return !v; });
  for (int r = 0; r < 4; ++r) {
    Term term(m);
    oracle::Mask fixed = 0, fixval = 0;
    for (int v = 1; v <= m; ++v)
      if (rng() % 3 == 0) {
        const bool b = rng() & 1;
        term.assign(v, b);
        fixed |= oracle::Mask{1} << (v - 1);
        if (b)
          fixval |= oracle::Mask{1} << (v - 1);
      }
    const Sdd c = condition(sdd, term);
    bool any_c = false;
    for (oracle::Mask p = 0; p < val.size(); ++p) {
      const bool got = evaluate(c, point_of(p, m));
      const bool want = val[(p & ~fixed) | fixval] != 0;
      bad += got != want;
      any_c |= want;
    }
    bad += is_consistent(c) != any_c;
    bad += consistency_under(sdd, term) != any_c;
  }
  return bad;
}

void sdd_algebra(Report &rep) {
  std::mt19937_64 rng(12);
  long bad = 0;
  int diagrams = 0;
  {
    auto vt = std::make_shared<const Vtree>(
        Vtree::parse_string(oracle::slurp(kFixtures + "/sample.vtree")));
    bad += check_algebra(Sdd::parse_string(oracle::slurp(kFixtures + "/sample.sdd"), vt), rng);
    auto one = std::make_shared<const Vtree>(
        Vtree::parse_string(oracle::slurp(kFixtures + "/one.vtree")));
    bad += check_algebra(Sdd::parse_string(oracle::slurp(kFixtures + "/constant.sdd"), one), rng);
    diagrams += 2;
  }
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + static_cast<int>(rng() % 11);
    if (k % 3 == 0) {
      bad += check_algebra(shannon_sdd(models::random_model(rng, m)), rng);
    } else {
      std::shared_ptr<const Vtree> vt;
      if (k % 3 == 1) {
        vt = std::make_shared<const Vtree>(Vtree::balanced(m));
      } else {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        vt = std::make_shared<const Vtree>(Vtree::right_linear(order));
      }
      std::vector<bool> table(std::size_t{1} << m);
      // Sparse, dense and balanced functions.
      const int bias = static_cast<int>(rng() % 3);
      for (std::size_t p = 0; p < table.size(); ++p)
        table[p] = bias == 0 ? rng() % 8 == 0 : bias == 1 ? rng() % 8 != 0 : (rng() & 1);
      bad += check_algebra(compile_truth_table(vt, table), rng);
    }
    ++diagrams;
  }
  rep.line(7, bad == 0,
           "SDD algebra: negation, conditioning, consistency exhaustive on " +
               std::to_string(diagrams) + " diagrams (m<=12), " + std::to_string(bad) +
               " violations");
}

std::string bench_csv(ClassifierKind kind) {
  BenchConfig spec;
  spec.kind = kind;
  spec.num_features = 10;
  spec.num_nodes = 25;
  spec.classifiers = 3;
  spec.queries = 20;
  spec.seed = 123;
  std::ostringstream out;
  batch_run(make_bench_items(spec), {2}, &out);
  return out.str();
}

std::string dimacs_of_generated(std::uint64_t seed) {
  const Obdd obdd = random_obdd(12, 40, seed);
  std::mt19937_64 rng(seed);
  const Instance inst = random_instance(12, rng, [&](const std::vector<int> &x) {
    return obdd.predict(x);
  });
  std::string out;
  for (Method method : {Method::OneStep, Method::TwoStep}) {
    const auto xe = encode_query(XpgClassifier::from_obdd(obdd, inst), inst, 5, method);
    out += write_dimacs(xe.cnf, &xe.vars);
    const auto se = encode_query(SddClassifier(shannon_sdd(obdd)), inst, 5, method);
    out += write_dimacs(se.cnf, &se.vars);
  }
  return out + random_obdd(12, 40, seed).serialize();
}

void determinism(Report &rep) {
  bool ok = true;
  for (std::uint64_t seed : {1u, 2u, 3u})
    ok = ok && dimacs_of_generated(seed) == dimacs_of_generated(seed);
  for (auto kind : {ClassifierKind::Obdd, ClassifierKind::ShannonSdd})
    ok = ok && bench_csv(kind) == bench_csv(kind);
  rep.line(8, ok, "determinism: DIMACS and CSV byte-identical across two runs");
}

void performance(Report &rep) {
  std::mt19937_64 rng(100);
  double worst = 0;
  int queries = 0, timeouts = 0;
  bool ok = true;
  const std::vector<std::pair<int, int>> shapes{{100, 2000}, {100, 1000}, {60, 2000}, {100, 300}};
  for (auto [m, nodes] : shapes)
    for (bool sdd_kind : {false, true}) {
      const Obdd obdd = random_obdd(m, nodes, rng());
      auto predict = [&](const std::vector<int> &x) { return obdd.predict(x); };
      std::shared_ptr<const ExplainableClassifier> sdd;
      if (sdd_kind)
        sdd = std::make_shared<SddClassifier>(shannon_sdd(obdd));
      for (int q = 0; q < 10; ++q) {
        const Instance inst = random_instance(m, rng, predict);
        auto clf = sdd ? sdd
                       : std::shared_ptr<const ExplainableClassifier>(std::make_shared<XpgClassifier>(
                             XpgClassifier::from_obdd(obdd, inst)));
        FmpQuery query = make_query(clf, inst, 1 + static_cast<int>(rng() % m), Method::TwoStep);
        query.time_limit_s = 10;
        const auto start = Clock::now();
        const auto out = decide_membership(query);
        const double s = since(start);
        worst = std::max(worst, s);
        timeouts += out.answer == Answer::Timeout;
        ok = ok && s < 10 && out.answer != Answer::Timeout;
        ++queries;
      }
    }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "performance: %d two-step queries, m<=100, <=2000 nodes, worst %.3f s, %d timeouts",
                queries, worst, timeouts);
  rep.line(9, ok, buf);
}

} // namespace

int main() {
  Report rep;
  auto guard = [&](int id, const std::function<void()> &f) {
    try {
      f();
    } catch (const std::exception &e) {
      rep.line(id, false, std::string("exception: ") + e.what());
    }
  };
  guard(1, [&] { sample_classifier(rep); });

  SuiteCounts suite;
  bool suite_ran = false;
  try {
    suite = oracle_suite();
    suite_ran = true;
  } catch (const std::exception &e) {
    for (int id : {2, 3, 4})
      rep.line(id, false, std::string("exception: ") + e.what());
  }
  if (suite_ran) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "oracle equivalence: %d classifiers, %ld queries, %ld mismatches (%.1f s)",
                  suite.classifiers, suite.queries, suite.mismatches, suite.seconds);
    rep.line(2, suite.mismatches == 0 && suite.classifiers >= 200 && suite.seconds < 300, buf);
    rep.line(3, suite.witness_violations == 0,
             "witness contract: " + std::to_string(suite.witness_violations) + " violations");
    rep.line(4, suite.seed_violations == 0 && suite.seed_checks > 0,
             "two-step seed check: " + std::to_string(suite.seed_checks) + " seeds, " +
                 std::to_string(suite.seed_violations) + " violations");
  }
  guard(5, [&] { duality(rep); });
  guard(6, [&] { encoding_size(rep); });
  guard(7, [&] { sdd_algebra(rep); });
  guard(8, [&] { determinism(rep); });
  guard(9, [&] { performance(rep); });
  return rep.all ? 0 : 1;
}
