#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "galois_csp/relation.hpp"

namespace gcsp {

// "eq" is binary equality and "false" the nullary empty relation; both are
// available in every language without being members of it.
struct Atom {
  std::string rel;
  std::vector<int> args;
  bool operator==(const Atom& o) const { return rel == o.rel && args == o.args; }
};

// Variables 0..num_free-1 are free (in order), the rest are existentially bound.
struct PPFormula {
  std::string name = "phi";
  int num_free = 0;
  int num_bound = 0;
  std::vector<Atom> atoms;

  int num_vars() const { return num_free + num_bound; }
  int add_bound() { return num_free + num_bound++; }
};

struct FormulaClass {
  bool quantifier_free = true;
  bool equality_free = true;
  bool operator==(const FormulaClass& o) const {
    return quantifier_free == o.quantifier_free && equality_free == o.equality_free;
  }
};

FormulaClass classify(const PPFormula& phi);

// All tuples (f(x_1),...,f(x_n)) over models f of phi.
Relation evaluate(const PPFormula& phi, const Language& gamma);

// Conjunction of every atom over gamma and eq (argument positions drawn from
// 0..ar(R)-1, repetition allowed) that holds on all tuples of R. Atoms over
// positions with equal columns are emitted once, on the first such position,
// together with the eq atoms that identify the duplicates; the formula is
// logically equivalent to the unabridged conjunction. An empty R also gets the
// "false" atom, so the empty relation is always definable.
PPFormula canonical_qfpp(const Relation& r, const Language& gamma);

// The single-atom definition R(x1..xn).
PPFormula atom_formula(const std::string& rel, int arity);

// Moves bound variable `bound_var` (a variable index >= num_free) to the end
// of the free list.
PPFormula promote_bound(const PPFormula& phi, int bound_var);

// Appends a copy of `sub` to `host`: sub's free variable i becomes
// free_map[i] in host, each bound variable of sub becomes a fresh bound
// variable of host.
void conjoin_instance(PPFormula& host, const PPFormula& sub, const std::vector<int>& free_map);

// Largest number of argument slots naming a single variable.
int max_var_degree(const PPFormula& phi);

// Text form: def <name>(x1,...,xn) := exists y1,...,ym . A1 & A2 & ...
PPFormula parse_formula(const std::string& text);
std::vector<PPFormula> parse_formulas(std::istream& is);
std::string format_formula(const PPFormula& phi);

}  // namespace gcsp
