#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "galois_csp/relation.hpp"

namespace gcsp {

// For a 3-tuple relation, rows are its tuples in canonical order, so row r is
// R[r] and column i reads (R[0][i], R[1][i], R[2][i]).

struct RBWitness {
  Value a = 0, b = 1;
  // rows[j] is the row of R playing t_{j+1} in the pattern.
  std::array<int, 3> rows{0, 1, 2};
  std::array<int, 8> indices{};
};

// The eight column patterns over (t1,t2,t3): (a,a,b),(a,b,a),(b,a,a),(b,b,a),
// (b,a,b),(a,b,b),(a,a,a),(b,b,b).
std::array<std::array<Value, 3>, 8> rb_patterns(Value a, Value b);

std::optional<RBWitness> detect_rb_extension(const Relation& r);
bool check_rb_witness(const Relation& r, const RBWitness& w);

// tau maps {0,1,2} -> {0,1,2}; the image of column i is
// (R[tau[0]][i], R[tau[1]][i], R[tau[2]][i]).
using Tau = std::array<int, 3>;
std::vector<Tau> all_taus();  // the 27 maps in lexicographic order

struct SaturationCheck {
  bool saturated = true;
  int column = -1;  // first column with a missing image
  Tau tau{0, 1, 2};
  Tuple missing;
};
SaturationCheck is_saturated(const Relation& r);

struct SaturationEntry {
  int col;   // output position of the new column
  int from;  // source column
  Tau tau;
};
struct SaturationResult {
  Relation relation;
  std::vector<SaturationEntry> map;
};
SaturationResult saturate(const Relation& r);

// Lines `col <j> from <i> tau <t1t2t3>`, all 1-based.
void write_saturation_map(std::ostream& os, const SaturationResult& s);

// First position whose column equals `col` (length |R|), or -1.
int find_column(const Relation& r, const Tuple& col);

// Columns of r as 3-row patterns; requires |r| = 3.
Tuple column3(const Relation& r, int i);

// Worked 3-valued matrices: an unsaturated 10-column relation, its
// variant with a 3-choice seventh column, and the 15-column saturation.
Relation example_r();
Relation example_r_prime();
Relation example_saturated();

// True iff a and b have the same arity, domain, and multiset of columns up to
// permuting columns (rows are compared in canonical order).
bool equal_up_to_column_permutation(const Relation& a, const Relation& b);

}  // namespace gcsp
