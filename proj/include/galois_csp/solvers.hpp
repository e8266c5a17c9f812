#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galois_csp/instance.hpp"

namespace gcsp {

enum class Status { sat, unsat, unknown };
std::string to_string(Status s);

struct SolveResult {
  Status status = Status::unknown;
  std::optional<Assignment> model;
  std::uint64_t node_count = 0;
  double time_ms = 0;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  std::uint64_t node_budget = UINT64_MAX;
  double time_budget_ms = 0;  // 0 = unlimited
};

// Chronological backtracking over all variables in a fixed order, rejecting a
// partial assignment as soon as some constraint has no compatible tuple.
// Exceeding the budget yields Status::unknown.
SolveResult brute_force(const Instance& inst, const SolveOptions& opts = {});

// Exact model count (saturating at UINT64_MAX).
std::uint64_t count_solutions(const Instance& inst);

// Branches on the tuples of the first constraint with an unassigned variable.
// Every relation of arity >= 2 must have exactly three tuples.
SolveResult branch_generic(const Instance& inst, const SolveOptions& opts = {});

struct RdOptions {
  SolveOptions solve;
  // When false, anchor clashes and unary constraints are only examined at the
  // leaves, exactly as in the recurrence analysis; when true, rows that clash
  // with the current identifications are never branched on.
  bool eager_conflicts = true;
};

// Anchored branching for instances over make_rd(k) plus unary relations.
SolveResult branch_rd(const Instance& inst, const RdOptions& opts = {});

}  // namespace gcsp
