#pragma once

#include "fmp/encode.hpp"
#include "fmp/explain.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fmp {

/// Which solver decides the encoded formula. An empty command selects the
/// built-in one; otherwise `command <dimacs-file>` is run.
struct Backend {
  std::string external_command;

  bool is_internal() const { return external_command.empty(); }
  /// "internal" or "external:<cmd>".
  static Backend parse(const std::string &text);
};

struct FmpQuery {
  std::shared_ptr<const ExplainableClassifier> classifier;
  Instance instance;
  int target = 0;
  Method method = Method::TwoStep;
  Backend backend;
  /// Per-query limit in seconds; <= 0 means none.
  double time_limit_s = 0;
};

enum class Answer { Yes, No, Timeout };

const char *to_string(Answer answer);

struct FmpStats {
  int vars = 0;
  int clauses = 0;
  double solve_s = 0;
  double total_s = 0;
};

struct FmpOutcome {
  Answer answer = Answer::No;
  /// An AXp containing the target; present iff the answer is Yes.
  std::optional<FeatureSet> witness;
  /// Two-step only: the weak AXp decoded from the model, before extraction.
  std::optional<FeatureSet> seed;
  /// The SDD was negated because the instance is predicted 1.
  bool negated = false;
  FmpStats stats;
};

/// The CNF a query would hand to the solver.
Encoding encode_query(const ExplainableClassifier &clf, const Instance &instance,
                      int target, Method method);

/// Decides whether some AXp of the instance contains the target. Two-step
/// answers verify that the seed is a weak AXp that stops being one without
/// the target before extracting the witness; a violation throws
/// Error(Internal).
FmpOutcome decide_membership(const FmpQuery &query);

/// One report row: a batch of queries against one classifier with one
/// method.
struct BatchItem {
  std::string name;
  int num_features = 0;
  int num_nodes = 0;
  Method method = Method::TwoStep;
  std::vector<FmpQuery> queries;
};

struct BatchRow {
  std::string name;
  int num_features = 0;
  int num_nodes = 0;
  Method method = Method::TwoStep;
  int queries = 0;
  int yes = 0;
  int timeouts = 0;
  double avg_vars = 0;
  double avg_clauses = 0;
  double max_s = 0;
  double avg_s = 0;
};

struct BatchOptions {
  int workers = 1;
};

inline constexpr const char *kBatchCsvHeader =
    "name,m,nodes,method,yes_pct,avg_vars,avg_cls,max_s,avg_s,timeouts";

/// Runs every query (in parallel up to `workers`) and returns one row per
/// item, in input order. Rows are also written as CSV to `sink` when given.
std::vector<BatchRow> batch_run(const std::vector<BatchItem> &items,
                                const BatchOptions &options, std::ostream *sink);

/// CSV line for a row, without the trailing newline. Times are printed in
/// tenths of a second.
std::string format_row(const BatchRow &row);

} // namespace fmp
