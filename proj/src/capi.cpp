#include "fmp/fmp.h"

#include "fmp/error.hpp"
#include "fmp/explain.hpp"
#include "fmp/generate.hpp"
#include "fmp/membership.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

struct fmp_classifier {
  std::shared_ptr<const fmp::ExplainableClassifier> clf;
  fmp::Instance instance;
};

struct fmp_result {
  fmp::FmpOutcome outcome;
};

namespace {

thread_local std::string last_error;

fmp_status status_of(fmp::ErrorCode code) {
  switch (code) {
  case fmp::ErrorCode::Parse: return FMP_ERR_PARSE;
  case fmp::ErrorCode::InvalidArgument: return FMP_ERR_INVALID_ARGUMENT;
  case fmp::ErrorCode::Precondition: return FMP_ERR_PRECONDITION;
  case fmp::ErrorCode::Io: return FMP_ERR_IO;
  case fmp::ErrorCode::Solver: return FMP_ERR_SOLVER;
  case fmp::ErrorCode::Limit: return FMP_ERR_LIMIT;
  case fmp::ErrorCode::Internal: return FMP_ERR_INTERNAL;
  }
  return FMP_ERR_INTERNAL;
}

template <typename F> fmp_status guarded(F &&body) {
  last_error.clear();
  try {
    body();
    return FMP_OK;
  } catch (const fmp::Error &e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
    return FMP_ERR_INTERNAL;
  } catch (const std::exception &e) {
    last_error = e.what();
    return FMP_ERR_INTERNAL;
  }
}

void require(bool ok, const char *what) {
  if (!ok)
    throw fmp::Error(fmp::ErrorCode::InvalidArgument, what);
}

std::string read_file(const char *path) {
  require(path != nullptr, "missing file path");
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw fmp::Error(fmp::ErrorCode::Io, std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

char *copy_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

fmp::Method method_of(fmp_method m) {
  require(m == FMP_ONE_STEP || m == FMP_TWO_STEP, "unknown method");
  return m == FMP_ONE_STEP ? fmp::Method::OneStep : fmp::Method::TwoStep;
}

fmp::FeatureSet feature_set(const fmp_classifier *clf, const int *features, int count) {
  require(count >= 0 && (count == 0 || features), "bad feature list");
  fmp::FeatureSet x(clf->clf->num_features());
  for (int i = 0; i < count; ++i)
    x.insert(features[i]);
  return x;
}

void load_sdd(const std::string &sdd_text, const std::string &vtree_text,
              const std::string &instance_text, fmp_classifier **out) {
  require(out != nullptr, "null output handle");
  auto vtree = std::make_shared<const fmp::Vtree>(fmp::Vtree::parse_string(vtree_text));
  auto clf = std::make_shared<fmp::SddClassifier>(fmp::Sdd::parse_string(sdd_text, vtree));
  fmp::Instance inst =
      fmp::bind_boolean(fmp::parse_instance_string(instance_text), clf->num_features());
  clf->check_instance(inst);
  *out = new fmp_classifier{std::move(clf), std::move(inst)};
}

/// A graph read on its own carries no instance values; a zero point of the
/// right length stands in, since the graph alone decides every query.
fmp_classifier *wrap_xpg(fmp::XpGraph graph) {
  const int m = graph.num_features();
  auto clf = std::make_shared<fmp::XpgClassifier>(std::move(graph), std::nullopt);
  return new fmp_classifier{std::move(clf), fmp::Instance{std::vector<int>(m, 0), 0}};
}

} // namespace

extern "C" {

const char *fmp_version(void) { return "1.0.0"; }

const char *fmp_status_name(fmp_status status) {
  switch (status) {
  case FMP_OK: return "ok";
  case FMP_ERR_PARSE: return "parse error";
  case FMP_ERR_INVALID_ARGUMENT: return "invalid argument";
  case FMP_ERR_PRECONDITION: return "precondition failed";
  case FMP_ERR_IO: return "i/o error";
  case FMP_ERR_SOLVER: return "solver error";
  case FMP_ERR_LIMIT: return "limit exceeded";
  case FMP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *fmp_last_error(void) { return last_error.c_str(); }

void fmp_string_free(char *s) { std::free(s); }

fmp_status fmp_load_sdd(const char *sdd_path, const char *vtree_path,
                        const char *instance_path, fmp_classifier **out) {
  return guarded([&] {
    load_sdd(read_file(sdd_path), read_file(vtree_path), read_file(instance_path), out);
  });
}

fmp_status fmp_load_sdd_text(const char *sdd, const char *vtree, const char *instance,
                             fmp_classifier **out) {
  return guarded([&] {
    require(sdd && vtree && instance, "null text");
    load_sdd(sdd, vtree, instance, out);
  });
}

fmp_status fmp_load_obdd(const char *obdd_path, const char *instance_path,
                         fmp_classifier **out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    const fmp::Obdd obdd = fmp::Obdd::parse_string(read_file(obdd_path));
    fmp::Instance inst = fmp::bind_boolean(
        fmp::parse_instance_string(read_file(instance_path)), obdd.num_vars());
    auto clf = std::make_shared<fmp::XpgClassifier>(fmp::XpgClassifier::from_obdd(obdd, inst));
    *out = new fmp_classifier{std::move(clf), std::move(inst)};
  });
}

fmp_status fmp_load_dt(const char *dt_path, const char *instance_path,
                       fmp_classifier **out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    const fmp::DecisionTree dt = fmp::DecisionTree::parse_string(read_file(dt_path));
    fmp::Instance inst = dt.bind(fmp::parse_instance_string(read_file(instance_path)));
    auto clf = std::make_shared<fmp::XpgClassifier>(fmp::XpgClassifier::from_dt(dt, inst));
    *out = new fmp_classifier{std::move(clf), std::move(inst)};
  });
}

fmp_status fmp_load_xpg(const char *xpg_path, const char *instance_path,
                        fmp_classifier **out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    fmp::XpGraph graph = fmp::XpGraph::parse_string(read_file(xpg_path));
    if (instance_path) {
      const auto record = fmp::parse_instance_string(read_file(instance_path));
      if (static_cast<int>(record.values.size()) != graph.num_features())
        throw fmp::Error(fmp::ErrorCode::InvalidArgument,
                         "instance has " + std::to_string(record.values.size()) +
                             " values, graph has " +
                             std::to_string(graph.num_features()) + " features");
    }
    *out = wrap_xpg(std::move(graph));
  });
}

fmp_status fmp_load_xpg_text(const char *xpg, fmp_classifier **out) {
  return guarded([&] {
    require(xpg && out, "null argument");
    *out = wrap_xpg(fmp::XpGraph::parse_string(xpg));
  });
}

void fmp_classifier_free(fmp_classifier *clf) { delete clf; }

int fmp_classifier_num_features(const fmp_classifier *clf) {
  return clf ? clf->clf->num_features() : 0;
}

int fmp_classifier_num_nodes(const fmp_classifier *clf) {
  return clf ? clf->clf->num_nodes() : 0;
}

fmp_status fmp_is_weak(const fmp_classifier *clf, fmp_explanation kind, const int *features,
                       int count, int *result) {
  return guarded([&] {
    require(clf && result, "null argument");
    const fmp::FeatureSet x = feature_set(clf, features, count);
    *result = kind == FMP_AXP ? fmp::is_weak_axp(*clf->clf, clf->instance, x)
                              : fmp::is_weak_cxp(*clf->clf, clf->instance, x);
  });
}

fmp_status fmp_find(const fmp_classifier *clf, fmp_explanation kind, int *features,
                    int capacity, int *count) {
  return guarded([&] {
    require(clf && count && capacity >= 0 && (capacity == 0 || features), "bad argument");
    const auto all = fmp::FeatureSet::all(clf->clf->num_features());
    const fmp::FeatureSet x = kind == FMP_AXP
                                  ? fmp::find_axp(*clf->clf, clf->instance, all)
                                  : fmp::find_cxp(*clf->clf, clf->instance, all);
    const auto members = x.members();
    *count = static_cast<int>(members.size());
    for (int i = 0; i < capacity && i < *count; ++i)
      features[i] = members[i];
  });
}

fmp_status fmp_enumerate(const fmp_classifier *clf, fmp_explanation kind, char **text) {
  return guarded([&] {
    require(clf && text, "null argument");
    const auto sets = kind == FMP_AXP
                          ? fmp::enumerate_axps_bruteforce(*clf->clf, clf->instance)
                          : fmp::enumerate_cxps_bruteforce(*clf->clf, clf->instance);
    std::string out;
    for (const auto &s : sets) {
      if (!out.empty())
        out += ' ';
      out += '{' + s.to_string() + '}';
    }
    *text = copy_string(out);
  });
}

void fmp_query_options_init(fmp_query_options *options) {
  if (!options)
    return;
  options->target = 1;
  options->method = FMP_TWO_STEP;
  options->backend = nullptr;
  options->time_limit_s = 0;
}

fmp_status fmp_decide(const fmp_classifier *clf, const fmp_query_options *options,
                      fmp_result **out) {
  return guarded([&] {
    require(clf && options && out, "null argument");
    fmp::FmpQuery query;
    query.classifier = clf->clf;
    query.instance = clf->instance;
    query.target = options->target;
    query.method = method_of(options->method);
    if (options->backend)
      query.backend = fmp::Backend::parse(options->backend);
    query.time_limit_s = options->time_limit_s;
    *out = new fmp_result{fmp::decide_membership(query)};
  });
}

void fmp_result_free(fmp_result *result) { delete result; }

fmp_answer fmp_result_answer(const fmp_result *result) {
  switch (result->outcome.answer) {
  case fmp::Answer::Yes: return FMP_YES;
  case fmp::Answer::No: return FMP_NO;
  case fmp::Answer::Timeout: return FMP_TIMEOUT;
  }
  return FMP_NO;
}

int fmp_result_witness(const fmp_result *result, int *features, int capacity) {
  if (!result || !result->outcome.witness)
    return 0;
  const auto members = result->outcome.witness->members();
  for (int i = 0; features && i < capacity && i < static_cast<int>(members.size()); ++i)
    features[i] = members[i];
  return static_cast<int>(members.size());
}

int fmp_result_num_vars(const fmp_result *result) { return result->outcome.stats.vars; }
int fmp_result_num_clauses(const fmp_result *result) { return result->outcome.stats.clauses; }
double fmp_result_solve_seconds(const fmp_result *result) {
  return result->outcome.stats.solve_s;
}
double fmp_result_total_seconds(const fmp_result *result) {
  return result->outcome.stats.total_s;
}

fmp_status fmp_encode(const fmp_classifier *clf, int target, fmp_method method,
                      char **dimacs) {
  return guarded([&] {
    require(clf && dimacs, "null argument");
    const fmp::Encoding enc =
        fmp::encode_query(*clf->clf, clf->instance, target, method_of(method));
    *dimacs = copy_string(fmp::write_dimacs(enc.cnf, &enc.vars));
  });
}

void fmp_bench_options_init(fmp_bench_options *options) {
  if (!options)
    return;
  options->kind = "obdd";
  options->num_features = 8;
  options->num_nodes = 20;
  options->classifiers = 1;
  options->queries = 100;
  options->seed = 1;
  options->workers = 1;
  options->time_limit_s = 0;
  options->backend = nullptr;
}

fmp_status fmp_bench(const fmp_bench_options *options, char **csv) {
  return guarded([&] {
    require(options && csv && options->kind, "null argument");
    fmp::BenchConfig spec;
    spec.kind = fmp::parse_classifier_kind(options->kind);
    spec.num_features = options->num_features;
    spec.num_nodes = options->num_nodes;
    spec.classifiers = options->classifiers;
    spec.queries = options->queries;
    spec.seed = options->seed;
    spec.time_limit_s = options->time_limit_s;
    if (options->backend)
      spec.backend = fmp::Backend::parse(options->backend);
    const auto items = fmp::make_bench_items(spec);
    std::ostringstream out;
    fmp::batch_run(items, {options->workers}, &out);
    *csv = copy_string(out.str());
  });
}

fmp_status fmp_generate(const char *kind, int num_features, int num_nodes,
                        unsigned long long seed, char **diagram, char **vtree) {
  return guarded([&] {
    require(kind && diagram && vtree, "null argument");
    const fmp::ClassifierKind k = fmp::parse_classifier_kind(kind);
    const fmp::Obdd obdd = fmp::random_obdd(num_features, num_nodes, seed);
    if (k == fmp::ClassifierKind::Obdd) {
      *diagram = copy_string(obdd.serialize());
      *vtree = nullptr;
      return;
    }
    const fmp::Sdd sdd = fmp::shannon_sdd(obdd);
    char *d = copy_string(sdd.serialize());
    try {
      *vtree = copy_string(sdd.vtree().serialize());
    } catch (...) {
      std::free(d);
      throw;
    }
    *diagram = d;
  });
}

} // extern "C"
