#include "fmp/generate.hpp"

#include "fmp/error.hpp"
#include "fmp/explain.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace fmp {

ClassifierKind parse_classifier_kind(const std::string &text) {
  if (text == "obdd")
    return ClassifierKind::Obdd;
  if (text == "shannon-sdd")
    return ClassifierKind::ShannonSdd;
  throw Error(ErrorCode::InvalidArgument,
              "unknown kind '" + text + "' (expected obdd or shannon-sdd)");
}

namespace {

// Uniform integer in [0, n) without relying on the distribution's
// implementation-defined algorithm, so output is portable across libraries.
size_t pick(std::mt19937_64 &rng, size_t n) { return static_cast<size_t>(rng() % n); }

template <typename T> void shuffle(std::vector<T> &v, std::mt19937_64 &rng) {
  for (size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[pick(rng, i)]);
}

} // namespace

Obdd random_obdd(int num_vars, int nodes, std::uint64_t seed) {
  if (num_vars < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one feature");
  if (nodes < 1)
    throw Error(ErrorCode::Limit, "a non-constant OBDD needs at least one decision node");
  std::mt19937_64 rng(seed);

  std::vector<int> order(num_vars);
  std::iota(order.begin(), order.end(), 1);
  shuffle(order, rng);
  const int levels = std::min(num_vars, nodes);

  // Level widths: one node per level to start, then the rest spread at
  // random subject to w[l] <= 2 w[l-1] (every node needs a parent) and to
  // the number of distinct child pairs available below.
  std::vector<long long> width(levels, 1);
  auto pairs_below = [&](int l) {
    long long avail = 2;
    for (int d = l + 1; d < levels; ++d)
      avail += width[d];
    return avail * (avail - 1);
  };
  int remaining = nodes - levels;
  int stalls = 0;
  while (remaining > 0) {
    if (levels == 1 || stalls > 64 * levels) {
      // Deterministic sweep for the leftovers before giving up.
      bool placed = false;
      for (int l = levels - 1; l >= 1 && !placed; --l)
        if (width[l] + 1 <= 2 * width[l - 1] && width[l] + 1 <= pairs_below(l) &&
            (l + 1 >= levels || width[l + 1] <= 2 * (width[l] + 1))) {
          ++width[l];
          placed = true;
        }
      if (!placed)
        throw Error(ErrorCode::Limit, "cannot fit " + std::to_string(nodes) +
                                          " nodes into a reduced OBDD over " +
                                          std::to_string(num_vars) + " features");
      --remaining;
      continue;
    }
    const int l = 1 + static_cast<int>(pick(rng, static_cast<size_t>(levels - 1)));
    if (width[l] + 1 <= 2 * width[l - 1] && width[l] + 1 <= pairs_below(l)) {
      ++width[l];
      --remaining;
      stalls = 0;
    } else {
      ++stalls;
    }
  }

  std::vector<ObddNode> arena;
  arena.push_back({0, 0, -1, -1, 0});
  arena.push_back({1, 0, -1, -1, 1});
  std::vector<int> pool{0, 1};       // nodes available as children
  std::vector<int> unparented{0, 1}; // must be used by the next level up
  for (int l = levels - 1; l >= 0; --l) {
    const int var = order[l];
    const int w = static_cast<int>(width[l]);
    // Nodes not yet referenced are paired up first (the odd one with any
    // other node); the rest of the level takes unused pairs from the pool.
    shuffle(unparented, rng);
    if (unparented.size() > 2 * static_cast<size_t>(w))
      throw Error(ErrorCode::Internal, "level too narrow for its children");
    std::set<std::pair<int, int>> used;
    std::vector<std::pair<int, int>> pairs;
    auto orient = [&](int a, int b) {
      return rng() & 1 ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    size_t u = 0;
    for (; u + 1 < unparented.size(); u += 2)
      pairs.push_back(orient(unparented[u], unparented[u + 1]));
    for (const auto &pr : pairs)
      used.insert(pr);
    auto free_pair = [&](int forced) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        const int a = forced >= 0 ? forced : pool[pick(rng, pool.size())];
        const int b = pool[pick(rng, pool.size())];
        if (a == b)
          continue;
        const auto pr = forced >= 0 ? orient(a, b) : std::make_pair(a, b);
        if (!used.count(pr))
          return pr;
      }
      for (int a : pool)
        for (int b : pool) {
          if (a == b || (forced >= 0 && a != forced && b != forced))
            continue;
          if (!used.count({a, b}))
            return std::make_pair(a, b);
        }
      throw Error(ErrorCode::Internal, "no distinct child pair left");
    };
    if (u < unparented.size()) {
      pairs.push_back(free_pair(unparented[u]));
      used.insert(pairs.back());
    }
    while (static_cast<int>(pairs.size()) < w) {
      pairs.push_back(free_pair(-1));
      used.insert(pairs.back());
    }
    shuffle(pairs, rng);

    std::vector<int> level_nodes;
    for (const auto &[lo, hi] : pairs) {
      const int index = static_cast<int>(arena.size());
      arena.push_back({index, var, lo, hi, 0});
      level_nodes.push_back(index);
    }
    for (int n : level_nodes)
      pool.push_back(n);
    unparented = level_nodes;
  }
  return Obdd::from_nodes(num_vars, std::move(arena));
}

std::vector<int> variable_order(const Obdd &obdd) {
  const int m = obdd.num_vars();
  // x -> y whenever a node on x has a child on y; Kahn's algorithm with the
  // smallest ready variable first.
  std::vector<std::set<int>> after(static_cast<size_t>(m) + 1);
  std::vector<int> indegree(static_cast<size_t>(m) + 1, 0);
  std::vector<char> tested(static_cast<size_t>(m) + 1, 0);
  for (const auto &n : obdd.nodes()) {
    if (n.is_terminal())
      continue;
    tested[n.var] = 1;
    for (int c : {n.lo, n.hi}) {
      const auto &child = obdd.node(c);
      if (!child.is_terminal() && after[n.var].insert(child.var).second)
        ++indegree[child.var];
    }
  }
  std::set<int> ready;
  for (int v = 1; v <= m; ++v)
    if (tested[v] && indegree[v] == 0)
      ready.insert(v);
  std::vector<int> order;
  while (!ready.empty()) {
    const int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int w : after[v])
      if (--indegree[w] == 0)
        ready.insert(w);
  }
  for (int v = 1; v <= m; ++v)
    if (tested[v] && indegree[v] > 0)
      throw Error(ErrorCode::InvalidArgument,
                  "diagram tests its variables in inconsistent orders");
  for (int v = 1; v <= m; ++v)
    if (!tested[v])
      order.push_back(v);
  return order;
}

Sdd shannon_sdd(const Obdd &obdd) {
  for (int c : obdd.classes())
    if (c != 0 && c != 1)
      throw Error(ErrorCode::InvalidArgument, "Shannon SDDs need classes 0 and 1");
  const std::vector<int> order = variable_order(obdd);
  auto vtree = std::make_shared<const Vtree>(Vtree::right_linear(order));
  std::vector<int> decision_vnode(static_cast<size_t>(obdd.num_vars()) + 1, -1);
  for (int i = 0; i < vtree->size(); ++i) {
    const auto &vn = vtree->node(i);
    if (!vn.is_leaf() && vtree->node(vn.left).is_leaf())
      decision_vnode[vtree->node(vn.left).var] = i;
  }

  SddBuilder builder(vtree);
  std::vector<int> map(obdd.size(), -1);
  for (int i = 0; i < obdd.size(); ++i) {
    const auto &n = obdd.node(i);
    if (n.is_terminal()) {
      map[i] = builder.constant(n.label == 1);
      continue;
    }
    const int lo = map[n.lo], hi = map[n.hi];
    const auto &lo_node = builder.node(lo), &hi_node = builder.node(hi);
    const bool constants = lo_node.kind <= SddKind::True && hi_node.kind <= SddKind::True;
    if (decision_vnode[n.var] < 0) {
      // Last variable of the order: only a literal fits at its leaf.
      if (!constants || lo_node.kind == hi_node.kind)
        throw Error(ErrorCode::Internal, "last variable must sit above terminals");
      map[i] = builder.literal(hi_node.kind == SddKind::True ? n.var : -n.var);
      continue;
    }
    map[i] = builder.decision(decision_vnode[n.var],
                              {{builder.literal(n.var), hi}, {builder.literal(-n.var), lo}});
  }
  return std::move(builder).finish(map[obdd.root()]);
}

std::vector<BatchItem> make_bench_items(const BenchConfig &spec) {
  if (spec.classifiers < 1 || spec.queries < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one classifier and one query");
  if (spec.num_features < 2)
    throw Error(ErrorCode::InvalidArgument, "need at least two features");
  std::mt19937_64 rng(spec.seed);
  std::vector<BatchItem> items;
  for (int c = 0; c < spec.classifiers; ++c) {
    const std::uint64_t clf_seed = rng();
    const Obdd obdd = random_obdd(spec.num_features, spec.num_nodes, clf_seed);
    std::string name = std::string(spec.kind == ClassifierKind::Obdd ? "obdd" : "sdd") +
                       "_m" + std::to_string(spec.num_features) + "_n" +
                       std::to_string(spec.num_nodes) + "_" + std::to_string(c);
    std::shared_ptr<const ExplainableClassifier> sdd_clf;
    int nodes = obdd.size();
    if (spec.kind == ClassifierKind::ShannonSdd) {
      auto clf = std::make_shared<SddClassifier>(shannon_sdd(obdd));
      nodes = clf->num_nodes();
      sdd_clf = clf;
    }
    std::vector<FmpQuery> queries;
    int negated = 0;
    for (int q = 0; q < spec.queries; ++q) {
      Instance inst = random_instance(spec.num_features, rng, [&](const std::vector<int> &p) {
        return obdd.predict(p);
      });
      FmpQuery query;
      query.instance = inst;
      query.target = 1 + static_cast<int>(pick(rng, static_cast<size_t>(spec.num_features)));
      query.backend = spec.backend;
      query.time_limit_s = spec.time_limit_s;
      if (sdd_clf) {
        query.classifier = sdd_clf;
        negated += inst.prediction == 1;
      } else {
        query.classifier = std::make_shared<XpgClassifier>(XpgClassifier::from_obdd(obdd, inst));
      }
      queries.push_back(std::move(query));
    }
    if (negated > 0)
      name += ":neg=" + std::to_string(negated);
    for (Method method : {Method::OneStep, Method::TwoStep}) {
      BatchItem item;
      item.name = name;
      item.num_features = spec.num_features;
      item.num_nodes = nodes;
      item.method = method;
      item.queries = queries;
      for (auto &q : item.queries)
        q.method = method;
      items.push_back(std::move(item));
    }
  }
  return items;
}

} // namespace fmp
