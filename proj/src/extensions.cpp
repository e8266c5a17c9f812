#include "galois_csp/extensions.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace gcsp {

std::array<std::array<Value, 3>, 8> rb_patterns(Value a, Value b) {
  return {{{a, a, b}, {a, b, a}, {b, a, a}, {b, b, a}, {b, a, b}, {a, b, b}, {a, a, a}, {b, b, b}}};
}

int find_column(const Relation& r, const Tuple& col) {
  if (col.size() != r.size()) return -1;
  for (int i = 0; i < r.arity(); ++i) {
    bool eq = true;
    for (std::size_t j = 0; j < r.size() && eq; ++j) eq = r[j][i] == col[j];
    if (eq) return i;
  }
  return -1;
}

Tuple column3(const Relation& r, int i) {
  if (r.size() != 3) throw std::invalid_argument("column3 needs a 3-tuple relation");
  return {r[0][i], r[1][i], r[2][i]};
}

std::optional<RBWitness> detect_rb_extension(const Relation& r) {
  if (r.size() != 3) return std::nullopt;
  const int k = r.domain();
  std::array<int, 3> perm{0, 1, 2};
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      auto pats = rb_patterns(static_cast<Value>(a), static_cast<Value>(b));
      std::array<int, 3> p = perm;
      do {
        RBWitness w;
        w.a = static_cast<Value>(a);
        w.b = static_cast<Value>(b);
        w.rows = p;
        bool ok = true;
        for (int j = 0; j < 8 && ok; ++j) {
          // t_{q+1} is row p[q]; column needs R[p[q]][i] = pats[j][q]
          Tuple col(3);
          for (int q = 0; q < 3; ++q) col[p[q]] = pats[j][q];
          int i = find_column(r, col);
          if (i < 0) ok = false;
          else w.indices[j] = i;
        }
        if (ok) return w;
      } while (std::next_permutation(p.begin(), p.end()));
    }
  return std::nullopt;
}

bool check_rb_witness(const Relation& r, const RBWitness& w) {
  if (r.size() != 3 || w.a == w.b) return false;
  auto pats = rb_patterns(w.a, w.b);
  std::array<int, 3> sorted = w.rows;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2}) return false;
  for (int j = 0; j < 8; ++j) {
    int i = w.indices[j];
    if (i < 0 || i >= r.arity()) return false;
    for (int q = 0; q < 3; ++q)
      if (r[w.rows[q]][i] != pats[j][q]) return false;
  }
  return true;
}

std::vector<Tau> all_taus() {
  std::vector<Tau> out;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) out.push_back({x, y, z});
  return out;
}

namespace {
Tuple tau_image(const Relation& r, int i, const Tau& t) { return {r[t[0]][i], r[t[1]][i], r[t[2]][i]}; }
}  // namespace

SaturationCheck is_saturated(const Relation& r) {
  if (r.size() != 3) throw std::invalid_argument("is_saturated needs a 3-tuple relation");
  auto cols = r.columns();
  std::sort(cols.begin(), cols.end());
  SaturationCheck res;
  for (int i = 0; i < r.arity(); ++i)
    for (const auto& t : all_taus()) {
      Tuple img = tau_image(r, i, t);
      if (!std::binary_search(cols.begin(), cols.end(), img)) {
        res.saturated = false;
        res.column = i;
        res.tau = t;
        res.missing = img;
        return res;
      }
    }
  return res;
}

SaturationResult saturate(const Relation& r) {
  if (r.size() != 3) throw std::invalid_argument("saturate needs a 3-tuple relation");
  auto cols = r.columns();
  std::vector<Tuple> present = cols;
  std::sort(present.begin(), present.end());
  SaturationResult res;
  for (int i = 0; i < r.arity(); ++i)
    for (const auto& t : all_taus()) {
      Tuple img = tau_image(r, i, t);
      auto it = std::lower_bound(present.begin(), present.end(), img);
      if (it != present.end() && *it == img) continue;
      present.insert(it, img);
      res.map.push_back({static_cast<int>(cols.size()), i, t});
      cols.push_back(img);
    }
  res.relation = from_columns(r.domain(), 3, cols);
  if (project(res.relation, [&] {
        std::vector<int> v(r.arity());
        std::iota(v.begin(), v.end(), 0);
        return v;
      }()) != r)
    throw InternalError("saturate changed the original columns");
  return res;
}

void write_saturation_map(std::ostream& os, const SaturationResult& s) {
  for (const auto& e : s.map)
    os << "col " << e.col + 1 << " from " << e.from + 1 << " tau " << e.tau[0] + 1 << e.tau[1] + 1
       << e.tau[2] + 1 << "\n";
}

Relation example_r() {
  return from_rows(3, {{0, 0, 1, 1, 1, 0, 0, 0, 1, 2}, {0, 1, 0, 1, 0, 1, 0, 0, 1, 2}, {1, 0, 0, 0, 1, 1, 2, 0, 1, 2}});
}

Relation example_r_prime() {
  return from_rows(3, {{0, 0, 1, 1, 1, 0, 0, 0, 1, 2}, {0, 1, 0, 1, 0, 1, 1, 0, 1, 2}, {1, 0, 0, 0, 1, 1, 2, 0, 1, 2}});
}

Relation example_saturated() {
  return from_rows(3, {{0, 0, 1, 1, 1, 0, 0, 0, 2, 2, 2, 0, 0, 1, 2},
                       {0, 1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 2},
                       {1, 0, 0, 0, 1, 1, 2, 0, 0, 0, 2, 2, 0, 1, 2}});
}

bool equal_up_to_column_permutation(const Relation& a, const Relation& b) {
  if (a.domain() != b.domain() || a.arity() != b.arity() || a.size() != b.size()) return false;
  if (a.size() > 8) throw UnsupportedError("column-permutation comparison supports at most 8 rows");
  auto bcols = b.columns();
  std::sort(bcols.begin(), bcols.end());
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Tuple> acols(a.arity(), Tuple(a.size()));
    for (int i = 0; i < a.arity(); ++i)
      for (std::size_t r = 0; r < a.size(); ++r) acols[i][r] = a[perm[r]][i];
    std::sort(acols.begin(), acols.end());
    if (acols == bcols) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace gcsp
