#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "galois_csp/relation.hpp"

namespace gcsp {

struct Constraint {
  int rel = 0;             // index into Instance::rels
  std::vector<int> vars;   // 0-based variable indices
  bool operator==(const Constraint& o) const { return rel == o.rel && vars == o.vars; }
};

using Assignment = std::vector<Value>;

// Variables are x1..xn in text, 0..n-1 in memory.
struct Instance {
  int k = 2;
  int num_vars = 0;
  std::vector<std::string> rel_names;
  std::vector<Relation> rels;
  std::vector<Constraint> constraints;

  // Returns the index of `name`, adding it if absent. Re-adding a name with a
  // different relation is an error.
  int add_relation(const std::string& name, const Relation& r);
  int find_relation(const std::string& name) const;
  void add_constraint(int rel, std::vector<int> vars);
  int add_var() { return num_vars++; }
  const Relation& relation_of(const Constraint& c) const { return rels[c.rel]; }

  void validate() const;
  bool satisfied_by(const Assignment& a) const;
  // Number of constraint positions naming each variable.
  std::vector<int> degrees() const;
};

bool operator==(const Instance& a, const Instance& b);

// One constraint over an empty relation of the given arity, all positions x1.
Instance canonical_unsat(int k, int arity);
bool is_canonical_unsat(const Instance& inst);

// Simple union-find used for variable identification.
class UnionFind {
 public:
  explicit UnionFind(int n = 0);
  int find(int x);
  // Joins the classes; the smaller representative survives.
  void unite(int a, int b);
  int add();
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
};

// Rewrites every constraint through uf.find; the variable count is unchanged.
void apply_identification(Instance& inst, UnionFind& uf);

void write_instance(std::ostream& os, const Instance& inst, bool inline_relations = true);
// `base_dir` resolves relative `relfile` paths.
Instance read_instance(std::istream& is, const std::string& base_dir = ".");
Instance read_instance_file(const std::string& path);
std::string to_text(const Instance& inst);
Instance from_text(const std::string& text);

}  // namespace gcsp
