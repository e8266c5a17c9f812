#pragma once

#include <string>
#include <vector>

#include "galois_csp/formula.hpp"
#include "galois_csp/instance.hpp"
#include "galois_csp/reductions.hpp"

namespace gcsp::detail {

// Writes the atoms of a formula into an instance. var_map sends every formula
// variable to an instance variable; eq atoms are collected in `uf` and a
// "false" atom sets `unsat`.
struct AtomEmitter {
  Instance& out;
  const Language& gamma;
  UnionFind& uf;
  bool unsat = false;

  void emit(const PPFormula& phi, const std::vector<int>& var_map);
};

// Finishes an emitted instance: canonical unsat if flagged, else identifies
// variables through uf.
void finish(Instance& out, UnionFind& uf, bool unsat, int unsat_arity);

ReductionReport make_report(const std::string& step, const Instance& in, const Instance& out);

// Appends a free variable (renumbering bound ones) and returns its index.
int append_free(PPFormula& phi);

}  // namespace gcsp::detail
