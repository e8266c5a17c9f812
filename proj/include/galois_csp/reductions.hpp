#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "galois_csp/extensions.hpp"
#include "galois_csp/formula.hpp"
#include "galois_csp/instance.hpp"

namespace gcsp {

// A pp-interpretation: tuples of F (width d over the source domain) encode
// values of a target domain E = {0..e_size-1} through the table f, where
// f[r] is the image of F[r].
struct Interpretation {
  int d = 1;
  Relation F;
  std::vector<Value> f;
  int e_size = 2;
  PPFormula def_F;
  // Definitions of f^{-1}(R) for target relations R, keyed by a name the
  // caller chooses ("rb", "rnn", ...). Each has d * ar(R) free variables.
  std::map<std::string, PPFormula> preimage_defs;

  // Throws std::invalid_argument unless f is total and surjective, def_F
  // evaluates to F, and every definition listed in `targets` evaluates to the
  // preimage of the corresponding target relation.
  void validate(const Language& gamma, const std::map<std::string, Relation>& targets) const;
};

// {(b_1,...,b_n) in F^n : (f(b_1),...,f(b_n)) in target}, flattened.
Relation preimage(const Interpretation& interp, const Relation& target);

struct ReductionReport {
  std::string step;
  int vars_in = 0, vars_out = 0;
  int constraints_in = 0, constraints_out = 0;
  long cv_constant = 0;  // vars_out - vars_in
  std::vector<std::string> notes;
  // LV parameters; zero when not applicable.
  int d = 0, k1 = 0, k2 = 0, L = 0;
};

struct Reduced {
  Instance instance;
  ReductionReport report;
};

// Replaces each constraint by the quantifier-free definition of its relation.
// Constraints over relations that already belong to gamma (same name and
// contents) and have no definition are kept.
Reduced qfpp_inline(const Instance& inst, const std::map<std::string, PPFormula>& defs, const Language& gamma);

struct TwoTupleRefinement {
  Relation F;             // two tuples, one per f-value
  std::vector<Value> f;   // table of the refined relation
  Tuple lo, hi;           // per-coordinate unary restriction {lo[i], hi[i]}
  int rounds = 0;
};
TwoTupleRefinement refine_two_tuple(const Relation& F, const std::vector<Value>& f);

// Needs interp.preimage_defs["rb"].
PPFormula build_rb_from_interpretation(const Language& gamma, const Interpretation& interp);

PPFormula eliminate_quantifiers_pair(const PPFormula& phi, const Language& gamma);
PPFormula qfpp_extension(const PPFormula& phi, const Language& gamma);

// Options for the position-removal reductions.
struct CvOptions {
  // Name given to the output relation in the instance.
  std::string out_name = "R";
  // Drop only: replace x by the substitute variable without first restricting
  // the constraint with a separating constant.
  bool literal = false;
};

// Acts on constraints whose relation equals r (which must be saturated).
Reduced dedup_3choice(const Instance& inst, const Relation& r);

// Removes positions of r not listed in `keep`. Removed positions must all be
// 3-choice (drop) or all be 2-choice/1-choice (add); the style is chosen from
// them. Constraints over other relations are carried along.
Reduced remove_positions(const Instance& inst, const Relation& r, const std::vector<int>& keep,
                         const CvOptions& opts = {});

// r_small must be the projection of r on its first ar(r_small) positions.
Reduced drop_3choice_args(const Instance& inst, const Relation& r, const Relation& r_small,
                          const CvOptions& opts = {});
// r_big must extend r by trailing 2-choice positions; output is over r.
Reduced add_2choice_args(const Instance& inst, const Relation& r_big, const Relation& r,
                         const CvOptions& opts = {});

enum class LiftOrder { drop_then_add, add_then_drop };

// Instance over make_rd(k) to an instance over r plus constant relations.
Reduced lift_rd(const Instance& inst, const Relation& r, LiftOrder order = LiftOrder::drop_then_add,
                const CvOptions& opts = {});

// Removes every unary constraint from an instance over make_rd(k) and unary
// relations.
Reduced eliminate_unary(const Instance& inst);

// Degree-2 instance over make_rnn() to an instance over gamma. Needs
// interp.preimage_defs["rnn"] and interp.def_F.
Reduced lv_reduce_3sat(const Instance& inst, const Language& gamma, const Interpretation& interp);

struct EasiestOptions {
  // A formula over gamma defining an R^B-extension; discovered among the
  // relations of gamma when absent.
  std::optional<PPFormula> extension;
  LiftOrder order = LiftOrder::drop_then_add;
};

Reduced reduce_easiest(const Instance& inst, const Language& gamma, const EasiestOptions& opts = {});

// Rewrites an instance over relation `from` into one over `to`, provided that
// (after a permutation of rows) every column of `to` is a column of `from`
// and vice versa. Variables and constraint count are unchanged.
Instance rewrite_by_columns(const Instance& inst, const Relation& from, const Relation& to,
                            const std::string& out_name);

}  // namespace gcsp
