#include "fmp/membership.hpp"

#include "fmp/error.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

namespace fmp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

Backend Backend::parse(const std::string &text) {
  if (text == "internal")
    return {};
  const std::string prefix = "external:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size())
    return {text.substr(prefix.size())};
  throw Error(ErrorCode::InvalidArgument,
              "unknown backend '" + text + "' (expected internal or external:<cmd>)");
}

const char *to_string(Answer answer) {
  switch (answer) {
  case Answer::Yes: return "YES";
  case Answer::No: return "NO";
  case Answer::Timeout: return "TIMEOUT";
  }
  return "?";
}

Encoding encode_query(const ExplainableClassifier &clf, const Instance &instance,
                      int target, Method method) {
  clf.check_instance(instance);
  if (const auto *sdd = dynamic_cast<const SddClassifier *>(&clf)) {
    Instance flipped{instance.point, 0};
    return encode_sdd(sdd->falsified_by(instance), flipped, target, method);
  }
  if (const auto *xpg = dynamic_cast<const XpgClassifier *>(&clf))
    return encode_xpg(xpg->graph(), target, method);
  throw Error(ErrorCode::InvalidArgument, "no encoding for this classifier type");
}

FmpOutcome decide_membership(const FmpQuery &query) {
  const auto start = Clock::now();
  if (!query.classifier)
    throw Error(ErrorCode::InvalidArgument, "query has no classifier");
  const ExplainableClassifier &clf = *query.classifier;
  const Instance &inst = query.instance;
  const int t = query.target;

  FmpOutcome out;
  out.negated = dynamic_cast<const SddClassifier *>(&clf) && inst.prediction == 1;
  const Encoding enc = encode_query(clf, inst, t, query.method);
  out.stats.vars = enc.cnf.num_vars;
  out.stats.clauses = static_cast<int>(enc.cnf.clauses.size());

  SolveOptions options;
  if (query.time_limit_s > 0)
    options.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(query.time_limit_s));
  const auto solve_start = Clock::now();
  const SatResult result = query.backend.is_internal()
                               ? solve(enc.cnf, {}, options)
                               : solve_external(enc.cnf, query.backend.external_command,
                                                options);
  out.stats.solve_s = seconds_since(solve_start);

  if (result.status == SatStatus::Unknown) {
    out.answer = Answer::Timeout;
  } else if (result.status == SatStatus::Unsat) {
    out.answer = Answer::No;
  } else {
    FeatureSet x = enc.decode(result);
    if (query.method == Method::TwoStep) {
      if (!is_weak_axp(clf, inst, x) || is_weak_axp(clf, inst, x.without(t)))
        throw Error(ErrorCode::Internal, "seed {" + x.to_string() +
                                             "} does not make target " +
                                             std::to_string(t) + " necessary");
      out.seed = x;
      x = find_axp(clf, inst, x);
    } else {
      if (!is_weak_axp(clf, inst, x))
        throw Error(ErrorCode::Internal, "model {" + x.to_string() + "} is not a weak AXp");
      for (int f : x.members())
        if (is_weak_axp(clf, inst, x.without(f)))
          throw Error(ErrorCode::Internal, "model {" + x.to_string() + "} is not minimal");
    }
    if (!x.contains(t))
      throw Error(ErrorCode::Internal, "witness {" + x.to_string() + "} misses the target");
    out.answer = Answer::Yes;
    out.witness = std::move(x);
  }
  out.stats.total_s = seconds_since(start);
  return out;
}

std::string format_row(const BatchRow &row) {
  const double yes_pct = row.queries ? 100.0 * row.yes / row.queries : 0.0;
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, ",%d,%d,%s,%.1f,%.1f,%.1f,%.1f,%.1f,%d",
                row.num_features, row.num_nodes, to_string(row.method), yes_pct,
                row.avg_vars, row.avg_clauses, row.max_s, row.avg_s, row.timeouts);
  return row.name + buffer;
}

std::vector<BatchRow> batch_run(const std::vector<BatchItem> &items,
                                const BatchOptions &options, std::ostream *sink) {
  if (items.empty())
    throw Error(ErrorCode::InvalidArgument, "batch has no items");
  struct Task {
    size_t item, query;
  };
  std::vector<Task> tasks;
  for (size_t i = 0; i < items.size(); ++i)
    for (size_t q = 0; q < items[i].queries.size(); ++q)
      tasks.push_back({i, q});
  if (tasks.empty())
    throw Error(ErrorCode::InvalidArgument, "batch has no queries");

  std::vector<FmpOutcome> outcomes(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      try {
        outcomes[k] = decide_membership(items[tasks[k].item].queries[tasks[k].query]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, options.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w)
    pool.emplace_back(worker);
  worker();
  for (auto &th : pool)
    th.join();
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  std::vector<BatchRow> rows;
  size_t k = 0;
  for (const auto &item : items) {
    BatchRow row;
    row.name = item.name;
    row.num_features = item.num_features;
    row.num_nodes = item.num_nodes;
    row.method = item.method;
    row.queries = static_cast<int>(item.queries.size());
    double vars = 0, clauses = 0, total = 0;
    for (size_t q = 0; q < item.queries.size(); ++q, ++k) {
      const auto &o = outcomes[k];
      row.yes += o.answer == Answer::Yes;
      row.timeouts += o.answer == Answer::Timeout;
      vars += o.stats.vars;
      clauses += o.stats.clauses;
      total += o.stats.total_s;
      row.max_s = std::max(row.max_s, o.stats.total_s);
    }
    if (row.queries) {
      row.avg_vars = vars / row.queries;
      row.avg_clauses = clauses / row.queries;
      row.avg_s = total / row.queries;
    }
    rows.push_back(row);
  }
  if (sink) {
    *sink << kBatchCsvHeader << '\n';
    for (const auto &row : rows)
      *sink << format_row(row) << '\n';
    sink->flush();
    if (!*sink)
      throw Error(ErrorCode::Io, "cannot write the batch report");
  }
  return rows;
}

} // namespace fmp
