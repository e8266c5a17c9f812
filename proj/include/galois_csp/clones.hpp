#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "galois_csp/relation.hpp"

namespace gcsp {

// Partial operation of arity a over {0..k-1}, stored densely: entry index is
// the base-k encoding of the argument tuple (first argument most significant),
// -1 marks an undefined point.
class PartialOperation {
 public:
  PartialOperation() = default;
  PartialOperation(int k, int arity);

  int domain() const { return k_; }
  int arity() const { return a_; }
  void set(const Tuple& args, Value v);
  void unset(const Tuple& args);
  std::optional<Value> apply(const Tuple& args) const;
  bool defined(const Tuple& args) const { return apply(args).has_value(); }
  bool total() const;
  std::size_t domain_size() const;
  std::vector<Tuple> defined_points() const;

  std::size_t encode(const Tuple& args) const;
  Tuple decode(std::size_t code) const;
  const std::vector<int>& table() const { return table_; }
  bool operator==(const PartialOperation& o) const {
    return k_ == o.k_ && a_ == o.a_ && table_ == o.table_;
  }

 private:
  int k_ = 2;
  int a_ = 1;
  std::vector<int> table_;
};

PartialOperation projection_op(int k, int arity, int which);
PartialOperation constant_op(int k, int arity, Value d);

struct Witness {
  PartialOperation op;
  std::vector<Tuple> tuples;  // t_1..t_a drawn from the violated relation
  Tuple image;                // f(t_1,...,t_a), not in that relation
  std::string relation;
};

struct PreserveResult {
  bool preserved = true;
  std::optional<Witness> witness;
};

PreserveResult preserves(const PartialOperation& f, const Relation& r, const std::string& name = "R");

// Checks the recorded violation again from scratch.
bool replay(const Witness& w, const Relation& r);

struct PolymorphismList {
  bool complete = true;  // false: budget exceeded, `ops` must not be used
  std::vector<PartialOperation> ops;
  std::uint64_t nodes = 0;
};

// Total operations of the given arity preserving every member of gamma.
PolymorphismList enumerate_polymorphisms(const Language& gamma, int arity,
                                         std::uint64_t node_budget = 50'000'000);

// Returns a partial operation that preserves gamma but not r, or none when
// pPol(gamma) is contained in pPol(r). Requires |r| <= 3. Among all
// candidates (a, tuple index sequence, image) the lexicographically smallest
// is returned.
std::optional<Witness> violating_partial_op(const Relation& r, const Language& gamma,
                                            const std::string& name = "R");

// True iff r belongs to the weak partial co-clone of gamma, decided through
// violating_partial_op.
bool qfpp_definable(const Relation& r, const Language& gamma);

enum class Tri { yes, no, unknown };
// Membership of r in the relational clone of gamma via the |r|-ary
// polymorphisms. Exact whenever the enumeration fits the budget.
Tri pp_definable(const Relation& r, const Language& gamma, std::uint64_t node_budget = 5'000'000);

// Witness text: `arity a`, a lines `row ...`, `image ...`, `violates <name>`.
void write_witness(std::ostream& os, const Witness& w);
Witness read_witness(std::istream& is, int k);

}  // namespace gcsp
