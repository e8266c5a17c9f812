#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcsp {

using Value = std::uint8_t;
using Tuple = std::vector<Value>;

// Thrown when a construction's own postcondition fails.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite relation over {0..k-1}. Tuples are kept sorted and unique, so two
// relations are equal iff their members compare equal.
class Relation {
 public:
  Relation() = default;
  Relation(int k, int arity, std::vector<Tuple> tuples);

  int domain() const { return k_; }
  int arity() const { return arity_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }
  const std::vector<Tuple>& tuples() const { return tuples_; }
  const Tuple& operator[](std::size_t r) const { return tuples_[r]; }
  bool contains(const Tuple& t) const;

  // Column i read top to bottom over the sorted tuples.
  Tuple column(int i) const;
  std::vector<Tuple> columns() const;

  bool operator==(const Relation& o) const {
    return k_ == o.k_ && arity_ == o.arity_ && tuples_ == o.tuples_;
  }
  bool operator!=(const Relation& o) const { return !(*this == o); }
  bool operator<(const Relation& o) const;

 private:
  int k_ = 1;
  int arity_ = 0;
  std::vector<Tuple> tuples_;
};

// Builds the relation whose r-th row is rows[r]; rows need not be sorted.
Relation from_rows(int k, const std::vector<Tuple>& rows);
// Builds a relation with `rows` tuples from a column list (column p gives the
// value of every row at position p).
Relation from_columns(int k, int rows, const std::vector<Tuple>& cols);

// Positions are 0-based throughout the C++ API; text formats are 1-based.
Relation project(const Relation& r, const std::vector<int>& indices);

struct RedundancyResult {
  Relation relation;
  // position_map[j] is the output position that carries original column j.
  std::vector<int> position_map;
};
RedundancyResult remove_redundant(const Relation& r);

int choice_class(const Relation& r, int i);
// Values occurring in column i, as a bitmask.
unsigned column_values(const Relation& r, int i);

Relation make_rd(int k);
Relation make_rb();   // the 8-ary Boolean relation with all of {0,1}^3 as columns
Relation make_rnn();  // its projection on the first six positions

Tuple concat(const Tuple& s, const Tuple& t);

// Named relations sharing one domain; std::map keeps iteration canonical.
struct Language {
  int k = 2;
  std::map<std::string, Relation> rels;

  void add(const std::string& name, const Relation& r);
  const Relation& at(const std::string& name) const;
  bool has(const std::string& name) const { return rels.count(name) > 0; }
  int max_arity() const;
};

Language make_satk(int kk);
Relation eq_relation(int k);
Relation constant_relation(int k, int d);
Relation unary_relation(int k, unsigned mask);
Relation empty_relation(int k, int arity);
Language all_unary(int k);
// "c<d>" for singletons, "in_<d>_<d>..." otherwise, "in_none" for the empty set.
std::string unary_name(unsigned mask);
unsigned popcount(unsigned mask);

// Relation text: header `rel <name> domain <k> arity <n> tuples <m>` plus m rows.
void write_relation(std::ostream& os, const std::string& name, const Relation& r);
std::pair<std::string, Relation> read_relation(std::istream& is);
Language read_language(std::istream& is);
std::string to_string(const Relation& r);
std::string to_matrix_string(const Relation& r);

}  // namespace gcsp
