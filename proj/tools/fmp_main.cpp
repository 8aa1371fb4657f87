// Command-line front end over the C interface.
//
// Exit codes: 0 success (YES for `fmp`), 1 NO, 2 error, 3 timeout.

#include "fmp/fmp.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitTimeout = 3;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wrong flag combination: reported with the subcommand's usage.
struct UsageFailure : Failure {
  using Failure::Failure;
};

void check(fmp_status status) {
  if (status != FMP_OK)
    throw Failure(std::string(fmp_status_name(status)) + ": " + fmp_last_error());
}

struct ClassifierArgs {
  std::string sdd, vtree, obdd, dt, xpg, instance, names;
};

void add_classifier_options(CLI::App *cmd, ClassifierArgs &a) {
  cmd->add_option("--sdd", a.sdd, "SDD file (needs --vtree and --instance)");
  cmd->add_option("--vtree", a.vtree, "vtree file for --sdd");
  cmd->add_option("--obdd", a.obdd, "OBDD file (needs --instance)");
  cmd->add_option("--dt", a.dt, "decision tree file (needs --instance)");
  cmd->add_option("--xpg", a.xpg, "explanation graph file");
  cmd->add_option("--instance", a.instance, "instance file (v: ... / c: ...)");
  cmd->add_option("--names", a.names, "feature names, one per line, for display");
}

struct Classifier {
  fmp_classifier *handle = nullptr;
  Classifier() = default;
  Classifier(const Classifier &) = delete;
  Classifier &operator=(const Classifier &) = delete;
  ~Classifier() { fmp_classifier_free(handle); }
};

void load(const ClassifierArgs &a, Classifier &out) {
  const int given = !a.sdd.empty() + !a.obdd.empty() + !a.dt.empty() + !a.xpg.empty();
  if (given != 1)
    throw UsageFailure("give exactly one of --sdd, --obdd, --dt, --xpg");
  if (!a.vtree.empty() && a.sdd.empty())
    throw UsageFailure("--vtree only applies to --sdd");
  if (!a.sdd.empty()) {
    if (a.vtree.empty())
      throw UsageFailure("--sdd needs --vtree");
    if (a.instance.empty())
      throw UsageFailure("--sdd needs --instance");
    check(fmp_load_sdd(a.sdd.c_str(), a.vtree.c_str(), a.instance.c_str(), &out.handle));
  } else if (!a.obdd.empty()) {
    if (a.instance.empty())
      throw UsageFailure("--obdd needs --instance");
    check(fmp_load_obdd(a.obdd.c_str(), a.instance.c_str(), &out.handle));
  } else if (!a.dt.empty()) {
    if (a.instance.empty())
      throw UsageFailure("--dt needs --instance");
    check(fmp_load_dt(a.dt.c_str(), a.instance.c_str(), &out.handle));
  } else {
    check(fmp_load_xpg(a.xpg.c_str(), a.instance.empty() ? nullptr : a.instance.c_str(),
                       &out.handle));
  }
}

std::vector<std::string> read_names(const std::string &path, int m) {
  if (path.empty())
    return {};
  std::ifstream in(path);
  if (!in)
    throw Failure("cannot open " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty())
      names.push_back(line);
  if (static_cast<int>(names.size()) != m)
    throw Failure("names file lists " + std::to_string(names.size()) + " names, expected " +
                  std::to_string(m));
  return names;
}

std::string join(const std::vector<int> &features) {
  std::string out;
  for (int f : features) {
    if (!out.empty())
      out += ',';
    out += std::to_string(f);
  }
  return out;
}

std::string named(const std::vector<int> &features, const std::vector<std::string> &names) {
  if (names.empty())
    return "";
  std::string out = " names=";
  for (size_t i = 0; i < features.size(); ++i)
    out += (i ? "," : "") + names[features[i] - 1];
  return out;
}

fmp_method parse_method(const std::string &text) {
  if (text == "one-step")
    return FMP_ONE_STEP;
  if (text == "two-step")
    return FMP_TWO_STEP;
  throw Failure("unknown method '" + text + "'");
}

std::string seconds(double s) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", s);
  return buffer;
}

void write_output(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out)
    throw Failure("cannot write " + path);
}

struct OwnedString {
  char *s = nullptr;
  ~OwnedString() { fmp_string_free(s); }
};

int cmd_fmp(const ClassifierArgs &a, int target, const std::string &method,
            const std::string &backend, double time_limit) {
  Classifier clf;
  load(a, clf);
  const auto names = read_names(a.names, fmp_classifier_num_features(clf.handle));
  fmp_query_options options;
  fmp_query_options_init(&options);
  options.target = target;
  options.method = parse_method(method);
  options.backend = backend.c_str();
  options.time_limit_s = time_limit;
  fmp_result *result = nullptr;
  check(fmp_decide(clf.handle, &options, &result));
  std::unique_ptr<fmp_result, void (*)(fmp_result *)> guard(result, fmp_result_free);
  const std::string stats = " vars=" + std::to_string(fmp_result_num_vars(result)) +
                            " clauses=" + std::to_string(fmp_result_num_clauses(result)) +
                            " solve_s=" + seconds(fmp_result_solve_seconds(result)) +
                            " total_s=" + seconds(fmp_result_total_seconds(result));
  switch (fmp_result_answer(result)) {
  case FMP_YES: {
    std::vector<int> w(fmp_result_witness(result, nullptr, 0));
    fmp_result_witness(result, w.data(), static_cast<int>(w.size()));
    std::cout << "YES witness=" << join(w) << named(w, names) << stats << '\n';
    return kExitYes;
  }
  case FMP_NO:
    std::cout << "NO" << stats << '\n';
    return kExitNo;
  case FMP_TIMEOUT:
    std::cout << "TIMEOUT" << stats << '\n';
    return kExitTimeout;
  }
  return kExitError;
}

int cmd_find(const ClassifierArgs &a, fmp_explanation kind) {
  Classifier clf;
  load(a, clf);
  const int m = fmp_classifier_num_features(clf.handle);
  const auto names = read_names(a.names, m);
  std::vector<int> x(m);
  int count = 0;
  check(fmp_find(clf.handle, kind, x.data(), m, &count));
  x.resize(count);
  std::cout << (kind == FMP_AXP ? "AXP " : "CXP ") << join(x) << named(x, names) << '\n';
  return 0;
}

int cmd_encode(const ClassifierArgs &a, int target, const std::string &method,
               const std::string &out) {
  Classifier clf;
  load(a, clf);
  OwnedString dimacs;
  check(fmp_encode(clf.handle, target, parse_method(method), &dimacs.s));
  write_output(out, dimacs.s);
  return 0;
}

int cmd_enum(const ClassifierArgs &a) {
  Classifier clf;
  load(a, clf);
  OwnedString axps, cxps;
  check(fmp_enumerate(clf.handle, FMP_AXP, &axps.s));
  check(fmp_enumerate(clf.handle, FMP_CXP, &cxps.s));
  std::cout << "AXPS: " << axps.s << '\n' << "CXPS: " << cxps.s << '\n';
  return 0;
}

struct BenchArgs {
  std::string kind = "obdd";
  int m = 8;
  int nodes = 20;
  int count = 1;
  int queries = 100;
  unsigned long long seed = 1;
  int workers = 1;
  double time_limit = 0;
  std::string backend = "internal";
  std::string out;
};

int cmd_bench(const BenchArgs &b) {
  fmp_bench_options options;
  fmp_bench_options_init(&options);
  options.kind = b.kind.c_str();
  options.num_features = b.m;
  options.num_nodes = b.nodes;
  options.classifiers = b.count;
  options.queries = b.queries;
  options.seed = b.seed;
  options.workers = b.workers;
  options.time_limit_s = b.time_limit;
  options.backend = b.backend.c_str();
  OwnedString csv;
  check(fmp_bench(&options, &csv.s));
  write_output(b.out, csv.s);
  return 0;
}

int cmd_generate(const BenchArgs &b) {
  OwnedString diagram, vtree;
  check(fmp_generate(b.kind.c_str(), b.m, b.nodes, b.seed, &diagram.s, &vtree.s));
  if (!vtree.s) {
    write_output(b.out.empty() ? "" : b.out + ".obdd", diagram.s);
    return 0;
  }
  if (b.out.empty())
    throw UsageFailure("--kind shannon-sdd writes two files; give --out <prefix>");
  write_output(b.out + ".sdd", diagram.s);
  write_output(b.out + ".vtree", vtree.s);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Feature membership for decision-diagram classifiers"};
  app.require_subcommand(1);

  ClassifierArgs ca;
  int target = 0;
  std::string method = "two-step";
  std::string backend = "internal";
  double time_limit = 0;
  std::string out;
  BenchArgs bench;

  auto *fmp_cmd = app.add_subcommand("fmp", "does some AXp contain the target feature?");
  add_classifier_options(fmp_cmd, ca);
  fmp_cmd->add_option("--target", target, "feature index, 1-based")->required();
  fmp_cmd->add_option("--method", method, "one-step or two-step")
      ->check(CLI::IsMember({"one-step", "two-step"}));
  fmp_cmd->add_option("--backend", backend, "internal or external:<cmd>");
  fmp_cmd->add_option("--time-limit-s", time_limit, "per-query limit in seconds");

  auto *axp_cmd = app.add_subcommand("axp", "one abductive explanation");
  add_classifier_options(axp_cmd, ca);
  auto *cxp_cmd = app.add_subcommand("cxp", "one contrastive explanation");
  add_classifier_options(cxp_cmd, ca);

  auto *encode_cmd = app.add_subcommand("encode", "write the membership CNF as DIMACS");
  add_classifier_options(encode_cmd, ca);
  encode_cmd->add_option("--target", target, "feature index, 1-based")->required();
  encode_cmd->add_option("--method", method, "one-step or two-step")
      ->check(CLI::IsMember({"one-step", "two-step"}));
  encode_cmd->add_option("--out", out, "output file (default stdout)");

  auto *enum_cmd = app.add_subcommand("enum", "all AXps and CXps by exhaustive search");
  add_classifier_options(enum_cmd, ca);

  auto *bench_cmd = app.add_subcommand("bench", "batch of random queries, CSV report");
  auto *gen_cmd = app.add_subcommand("generate", "random classifier");
  for (auto *cmd : {bench_cmd, gen_cmd}) {
    cmd->add_option("--kind", bench.kind, "obdd or shannon-sdd")
        ->check(CLI::IsMember({"obdd", "shannon-sdd"}));
    cmd->add_option("--m", bench.m, "feature count");
    cmd->add_option("--nodes", bench.nodes, "decision node budget");
    cmd->add_option("--seed", bench.seed, "random seed");
    cmd->add_option("--out", bench.out, "output file (generate: path prefix)");
  }
  bench_cmd->add_option("--count", bench.count, "number of classifiers");
  bench_cmd->add_option("--queries", bench.queries, "queries per classifier");
  bench_cmd->add_option("--workers", bench.workers, "parallel queries");
  bench_cmd->add_option("--time-limit-s", bench.time_limit, "per-query limit in seconds");
  bench_cmd->add_option("--backend", bench.backend, "internal or external:<cmd>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kExitError;
  }

  try {
    if (*fmp_cmd)
      return cmd_fmp(ca, target, method, backend, time_limit);
    if (*axp_cmd)
      return cmd_find(ca, FMP_AXP);
    if (*cxp_cmd)
      return cmd_find(ca, FMP_CXP);
    if (*encode_cmd)
      return cmd_encode(ca, target, method, out);
    if (*enum_cmd)
      return cmd_enum(ca);
    if (*bench_cmd)
      return cmd_bench(bench);
    if (*gen_cmd)
      return cmd_generate(bench);
  } catch (const UsageFailure &e) {
    std::cerr << "error: " << e.what() << '\n' << app.get_subcommands().front()->help();
    return kExitError;
  } catch (const Failure &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
