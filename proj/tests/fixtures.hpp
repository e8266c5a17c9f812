#pragma once

// Hand-typed reference matrices. Each row is one tuple.

#include "galois_csp/relation.hpp"

namespace fixtures {

inline gcsp::Relation rneqneqneq() {
  return gcsp::from_rows(2, {{0, 0, 1, 1, 1, 0, 0, 1}, {0, 1, 0, 1, 0, 1, 0, 1}, {1, 0, 0, 0, 1, 1, 0, 1}});
}

inline gcsp::Relation rneqneq() {
  return gcsp::from_rows(2, {{0, 0, 1, 1, 1, 0}, {0, 1, 0, 1, 0, 1}, {1, 0, 0, 0, 1, 1}});
}

// Ten columns, missing the image (0,2,0) of column 7.
inline gcsp::Relation r_ex() {
  return gcsp::from_rows(3, {{0, 0, 1, 1, 1, 0, 0, 0, 1, 2}, {0, 1, 0, 1, 0, 1, 0, 0, 1, 2}, {1, 0, 0, 0, 1, 1, 2, 0, 1, 2}});
}

// Same as r_ex but column 7 takes three values.
inline gcsp::Relation r_ex_prime() {
  return gcsp::from_rows(3, {{0, 0, 1, 1, 1, 0, 0, 0, 1, 2}, {0, 1, 0, 1, 0, 1, 1, 0, 1, 2}, {1, 0, 0, 0, 1, 1, 2, 0, 1, 2}});
}

// The 15-column saturation of r_ex.
inline gcsp::Relation r_ex_saturated() {
  return gcsp::from_rows(3, {{0, 0, 1, 1, 1, 0, 0, 0, 2, 2, 2, 0, 0, 1, 2},
                             {0, 1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 2},
                             {1, 0, 0, 0, 1, 1, 2, 0, 0, 0, 2, 2, 0, 1, 2}});
}

}  // namespace fixtures
