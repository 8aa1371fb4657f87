#pragma once

#include "fmp/cnf.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fmp {

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  /// model[v] for v in 1..num_vars; slot 0 unused. Empty unless Sat.
  std::vector<char> model;

  bool is_sat() const { return status == SatStatus::Sat; }
  bool value(int var) const { return model.at(var) != 0; }
};

struct SolveOptions {
  /// Checked cooperatively; an expired deadline yields Unknown.
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::int64_t conflict_limit = -1;
};

struct SolverStats {
  std::int64_t decisions = 0;
  std::int64_t conflicts = 0;
  std::int64_t propagations = 0;
  std::int64_t restarts = 0;
};

/// Complete CDCL search: two watched literals, VSIDS with phase saving,
/// Luby restarts and activity-based learnt clause reduction. Deterministic:
/// ties in the decision heap go to the lowest variable. Every Sat answer is
/// checked against all clauses before it is returned.
SatResult solve(const CnfFormula &cnf, std::span<const int> assumptions = {},
                const SolveOptions &options = {}, SolverStats *stats = nullptr);

bool satisfies(const CnfFormula &cnf, const std::vector<char> &model);

/// Runs `command <dimacs-file>` and reads competition-format output
/// (`s SATISFIABLE` / `s UNSATISFIABLE` / `v ...` lines). Spawn failures,
/// unparseable output and models that fail local verification are errors
/// (ErrorCode::Solver), never verdicts.
SatResult solve_external(const CnfFormula &cnf, const std::string &command,
                         const SolveOptions &options = {});

/// Parses competition-format solver output for a formula over `num_vars`.
SatResult parse_solver_output(std::istream &in, int num_vars);

} // namespace fmp
