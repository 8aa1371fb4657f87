#include "fmp/sat.hpp"

#include "fmp/error.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fmp {

namespace {

using Lit = std::uint32_t;
constexpr Lit kNoLit = ~Lit{0};
constexpr int kNoReason = -1;

inline Lit make_lit(int var, bool negative) {
  return static_cast<Lit>(var) * 2 + (negative ? 1 : 0);
}
inline int lit_var(Lit l) { return static_cast<int>(l >> 1); }
inline bool lit_neg(Lit l) { return (l & 1) != 0; }
inline Lit lit_not(Lit l) { return l ^ 1; }
inline Lit from_dimacs(int lit) { return make_lit(std::abs(lit) - 1, lit < 0); }

// Truth values: 0 false, 1 true, 2 undefined.
constexpr std::uint8_t kFalse = 0, kTrue = 1, kUndef = 2;

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i)
    r *= y;
  return r;
}

struct ClauseData {
  std::vector<Lit> lits;
  double activity = 0;
  bool learnt = false;
  bool deleted = false;
};

struct Watcher {
  int cref;
  Lit blocker;
};

class CdclSolver {
public:
  CdclSolver(const CnfFormula &cnf, const SolveOptions &options)
      : num_vars_(cnf.num_vars), options_(options) {
    assigns_.assign(num_vars_, kUndef);
    level_.assign(num_vars_, 0);
    reason_.assign(num_vars_, kNoReason);
    polarity_.assign(num_vars_, 1); // 1 = prefer negative, as in MiniSat
    activity_.assign(num_vars_, 0.0);
    seen_.assign(num_vars_, 0);
    heap_index_.assign(num_vars_, -1);
    watches_.assign(2 * static_cast<size_t>(num_vars_), {});
    for (int v = 0; v < num_vars_; ++v)
      heap_insert(v);
    for (const auto &clause : cnf.clauses) {
      if (!add_problem_clause(clause)) {
        inconsistent_ = true;
        break;
      }
    }
    max_learnts_ = std::max<double>(1000.0, clauses_.size() / 3.0);
  }

  SatStatus run(std::span<const int> assumptions) {
    for (int a : assumptions) {
      if (a == 0 || std::abs(a) > num_vars_)
        throw Error(ErrorCode::InvalidArgument,
                    "assumption " + std::to_string(a) + " outside the formula");
      assumptions_.push_back(from_dimacs(a));
    }
    if (inconsistent_ || propagate() != kNoReason)
      return SatStatus::Unsat;
    if (out_of_budget())
      return SatStatus::Unknown;
    for (int restart = 0;; ++restart) {
      const auto budget = static_cast<std::int64_t>(luby(2.0, restart) * 100);
      SatStatus status = search(budget);
      if (status != SatStatus::Unknown || stopped_)
        return status;
      ++stats.restarts;
    }
  }

  std::vector<char> model() const {
    std::vector<char> out(static_cast<size_t>(num_vars_) + 1, 0);
    for (int v = 0; v < num_vars_; ++v)
      out[v + 1] = assigns_[v] == kTrue;
    return out;
  }

  SolverStats stats;

private:
  std::uint8_t value(Lit l) const {
    std::uint8_t a = assigns_[lit_var(l)];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (lit_neg(l) ? 1 : 0));
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  bool add_problem_clause(const Clause &clause) {
    std::vector<Lit> lits;
    for (int l : clause)
      lits.push_back(from_dimacs(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 1; i < lits.size(); ++i)
      if (lits[i] == lit_not(lits[i - 1]))
        return true; // tautology
    // Drop literals already false at level 0; satisfied clauses vanish.
    std::vector<Lit> kept;
    for (Lit l : lits) {
      if (value(l) == kTrue)
        return true;
      if (value(l) == kUndef)
        kept.push_back(l);
    }
    if (kept.empty())
      return false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      return propagate() == kNoReason;
    }
    attach(new_clause(std::move(kept), false));
    return true;
  }

  int new_clause(std::vector<Lit> lits, bool learnt) {
    clauses_.push_back({std::move(lits), 0.0, learnt, false});
    int cref = static_cast<int>(clauses_.size()) - 1;
    if (learnt)
      learnts_.push_back(cref);
    return cref;
  }

  void attach(int cref) {
    const auto &c = clauses_[cref].lits;
    watches_[lit_not(c[0])].push_back({cref, c[1]});
    watches_[lit_not(c[1])].push_back({cref, c[0]});
  }

  void enqueue(Lit l, int reason) {
    int v = lit_var(l);
    assigns_[v] = lit_neg(l) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Returns the conflicting clause or kNoReason.
  int propagate() {
    int conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      ++stats.propagations;
      auto &ws = watches_[p];
      size_t i = 0, j = 0;
      const Lit false_lit = lit_not(p);
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        auto &cd = clauses_[w.cref];
        if (cd.deleted) {
          ++i;
          continue;
        }
        auto &c = cd.lits;
        if (c[0] == false_lit)
          std::swap(c[0], c[1]);
        ++i;
        Lit first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[lit_not(c[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved)
          continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size())
            ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason)
        break;
    }
    return conflict;
  }

  void analyze(int conflict, std::vector<Lit> &learnt, int &backtrack_level) {
    learnt.clear();
    learnt.push_back(kNoLit);
    int path = 0;
    Lit p = kNoLit;
    int index = static_cast<int>(trail_.size()) - 1;
    int cref = conflict;
    do {
      auto &cd = clauses_[cref];
      if (cd.learnt)
        bump_clause(cd);
      for (size_t k = (p == kNoLit ? 0 : 1); k < cd.lits.size(); ++k) {
        Lit q = cd.lits[k];
        int v = lit_var(q);
        if (seen_[v] || level_[v] == 0)
          continue;
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[lit_var(trail_[index])])
        --index;
      p = trail_[index--];
      cref = reason_[lit_var(p)];
      seen_[lit_var(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = lit_not(p);

    // Local minimisation: drop literals implied by other learnt literals.
    std::vector<Lit> kept{learnt[0]};
    for (size_t k = 1; k < learnt.size(); ++k) {
      int v = lit_var(learnt[k]);
      int r = reason_[v];
      bool redundant = r != kNoReason;
      if (redundant)
        for (Lit q : clauses_[r].lits) {
          int u = lit_var(q);
          if (u != v && !seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      if (!redundant)
        kept.push_back(learnt[k]);
    }
    for (size_t k = 1; k < learnt.size(); ++k)
      seen_[lit_var(learnt[k])] = 0;
    learnt.swap(kept);

    backtrack_level = 0;
    if (learnt.size() > 1) {
      size_t max_i = 1;
      for (size_t k = 2; k < learnt.size(); ++k)
        if (level_[lit_var(learnt[k])] > level_[lit_var(learnt[max_i])])
          max_i = k;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[lit_var(learnt[1])];
    }
  }

  void cancel_until(int level) {
    if (decision_level() <= level)
      return;
    for (int c = static_cast<int>(trail_.size()) - 1; c >= trail_lim_[level]; --c) {
      int v = lit_var(trail_[c]);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      polarity_[v] = lit_neg(trail_[c]) ? 1 : 0;
      if (heap_index_[v] < 0)
        heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  bool out_of_budget() {
    if (options_.conflict_limit >= 0 && stats.conflicts >= options_.conflict_limit)
      return true;
    if (options_.deadline && std::chrono::steady_clock::now() >= *options_.deadline)
      return true;
    return false;
  }

  SatStatus search(std::int64_t conflict_budget) {
    std::int64_t conflicts_here = 0;
    std::vector<Lit> learnt;
    for (;;) {
      int conflict = propagate();
      if (conflict != kNoReason) {
        ++stats.conflicts;
        ++conflicts_here;
        if (decision_level() == 0)
          return SatStatus::Unsat;
        int backtrack_level = 0;
        analyze(conflict, learnt, backtrack_level);
        cancel_until(backtrack_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          int cref = new_clause(learnt, true);
          attach(cref);
          bump_clause(clauses_[cref]);
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
        if ((stats.conflicts & 255) == 0 && out_of_budget()) {
          stopped_ = true;
          return SatStatus::Unknown;
        }
        continue;
      }
      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return SatStatus::Unknown;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >=
          max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      Lit next = kNoLit;
      while (decision_level() < static_cast<int>(assumptions_.size())) {
        Lit a = assumptions_[decision_level()];
        if (value(a) == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(a) == kFalse) {
          return SatStatus::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next == kNoLit) {
        ++stats.decisions;
        if ((stats.decisions & 4095) == 0 && out_of_budget()) {
          stopped_ = true;
          return SatStatus::Unknown;
        }
        int v = pick_branch_var();
        if (v < 0)
          return SatStatus::Sat;
        next = make_lit(v, polarity_[v] != 0);
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoReason);
    }
  }

  void reduce_db() {
    std::vector<int> candidates;
    for (int cref : learnts_) {
      const auto &cd = clauses_[cref];
      if (cd.deleted)
        continue;
      candidates.push_back(cref);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return clauses_[a].activity < clauses_[b].activity;
    });
    std::vector<int> keep;
    const size_t half = candidates.size() / 2;
    for (size_t i = 0; i < candidates.size(); ++i) {
      auto &cd = clauses_[candidates[i]];
      bool locked = false;
      int v0 = lit_var(cd.lits[0]);
      if (reason_[v0] == candidates[i] && value(cd.lits[0]) == kTrue)
        locked = true;
      if (i < half && cd.lits.size() > 2 && !locked) {
        cd.deleted = true;
        cd.lits.clear();
        cd.lits.shrink_to_fit();
      } else {
        keep.push_back(candidates[i]);
      }
    }
    learnts_.swap(keep);
    for (auto &ws : watches_)
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher &w) { return clauses_[w.cref].deleted; }),
               ws.end());
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto &a : activity_)
        a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0)
      heap_up(heap_index_[v]);
  }

  void bump_clause(ClauseData &cd) {
    cd.activity += clause_inc_;
    if (cd.activity > 1e20) {
      for (int cref : learnts_)
        clauses_[cref].activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  int pick_branch_var() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assigns_[v] == kUndef)
        return v;
    }
    return -1;
  }

  // Max-heap on activity; lower variable index wins ties.
  bool heap_before(int a, int b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(int v) {
    heap_index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_index_[v]);
  }
  void heap_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!heap_before(v, heap_[parent]))
        break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }
  void heap_down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n)
        break;
      if (child + 1 < n && heap_before(heap_[child + 1], heap_[child]))
        ++child;
      if (!heap_before(heap_[child], v))
        break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }
  int heap_pop() {
    int top = heap_[0];
    heap_index_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  int num_vars_;
  SolveOptions options_;
  bool inconsistent_ = false;
  bool stopped_ = false;

  std::vector<ClauseData> clauses_;
  std::vector<int> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<Lit> assumptions_;

  std::vector<int> heap_;
  std::vector<int> heap_index_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0;
};

} // namespace

bool satisfies(const CnfFormula &cnf, const std::vector<char> &model) {
  if (static_cast<int>(model.size()) != cnf.num_vars + 1)
    return false;
  for (const auto &clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause)
      if ((model[std::abs(lit)] != 0) == (lit > 0)) {
        sat = true;
        break;
      }
    if (!sat)
      return false;
  }
  return true;
}

SatResult solve(const CnfFormula &cnf, std::span<const int> assumptions,
                const SolveOptions &options, SolverStats *stats) {
  cnf.validate();
  CdclSolver solver(cnf, options);
  SatResult result;
  result.status = solver.run(assumptions);
  if (stats)
    *stats = solver.stats;
  if (result.status == SatStatus::Sat) {
    result.model = solver.model();
    if (!satisfies(cnf, result.model))
      throw Error(ErrorCode::Internal, "solver produced a model that violates a clause");
    for (int a : assumptions)
      if (result.value(std::abs(a)) != (a > 0))
        throw Error(ErrorCode::Internal, "solver model violates an assumption");
  }
  return result;
}

SatResult parse_solver_output(std::istream &in, int num_vars) {
  SatResult result;
  bool have_status = false;
  std::vector<char> model(static_cast<size_t>(num_vars) + 1, 0);
  std::vector<char> assigned(static_cast<size_t>(num_vars) + 1, 0);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag))
      continue;
    if (tag == "s") {
      std::string rest;
      std::getline(ls, rest);
      rest.erase(0, rest.find_first_not_of(' '));
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r'))
        rest.pop_back();
      if (have_status)
        throw Error(ErrorCode::Solver, "solver output has two status lines");
      if (rest == "SATISFIABLE")
        result.status = SatStatus::Sat;
      else if (rest == "UNSATISFIABLE")
        result.status = SatStatus::Unsat;
      else if (rest == "UNKNOWN")
        result.status = SatStatus::Unknown;
      else
        throw Error(ErrorCode::Solver, "unrecognised status line 's " + rest + "'");
      have_status = true;
    } else if (tag == "v") {
      std::string token;
      while (ls >> token) {
        char *end = nullptr;
        long lit = std::strtol(token.c_str(), &end, 10);
        if (*end != '\0')
          throw Error(ErrorCode::Solver, "bad value token '" + token + "'");
        if (lit == 0)
          continue;
        if (std::labs(lit) > num_vars)
          throw Error(ErrorCode::Solver, "value for unknown variable " + token);
        model[std::labs(lit)] = lit > 0;
        assigned[std::labs(lit)] = 1;
      }
    }
  }
  if (!have_status)
    throw Error(ErrorCode::Solver, "solver output has no status line");
  if (result.status == SatStatus::Sat)
    result.model = std::move(model); // unlisted variables default to false
  return result;
}

SatResult solve_external(const CnfFormula &cnf, const std::string &command,
                         const SolveOptions &options) {
  cnf.validate();
  (void)options;
  std::string path = (std::filesystem::temp_directory_path() / "fmp-XXXXXX.cnf").string();
  int fd = ::mkstemps(path.data(), 4);
  if (fd < 0)
    throw Error(ErrorCode::Io, "cannot create a temporary DIMACS file");
  ::close(fd);
  struct Cleanup {
    std::string path;
    ~Cleanup() { std::remove(path.c_str()); }
  } cleanup{path};
  {
    std::ofstream out(path);
    out << write_dimacs(cnf);
    if (!out)
      throw Error(ErrorCode::Io, "cannot write " + path);
  }
  const std::string full = command + " '" + path + "' 2>/dev/null";
  FILE *pipe = ::popen(full.c_str(), "r");
  if (!pipe)
    throw Error(ErrorCode::Solver, "cannot spawn '" + command + "'");
  std::string output;
  char buffer[4096];
  size_t n;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0)
    output.append(buffer, n);
  const int status = ::pclose(pipe);
  // Competition solvers exit 10/20; 127 means the shell found no command.
  if (status == -1 || (WIFEXITED(status) && WEXITSTATUS(status) == 127))
    throw Error(ErrorCode::Solver, "cannot spawn '" + command + "'");
  std::istringstream in(output);
  SatResult result = parse_solver_output(in, cnf.num_vars);
  if (result.status == SatStatus::Sat && !satisfies(cnf, result.model))
    throw Error(ErrorCode::Solver, "external model violates the formula");
  return result;
}

} // namespace fmp
