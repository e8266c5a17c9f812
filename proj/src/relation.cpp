#include "galois_csp/relation.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

namespace gcsp {

Relation::Relation(int k, int arity, std::vector<Tuple> tuples)
    : k_(k), arity_(arity), tuples_(std::move(tuples)) {
  if (k < 1) throw std::invalid_argument("domain size must be at least 1");
  if (arity < 0) throw std::invalid_argument("negative arity");
  for (const auto& t : tuples_) {
    if (static_cast<int>(t.size()) != arity)
      throw std::invalid_argument("tuple length does not match arity");
    for (Value v : t)
      if (v >= k) throw std::invalid_argument("tuple entry outside domain");
  }
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

bool Relation::contains(const Tuple& t) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), t);
}

Tuple Relation::column(int i) const {
  if (i < 0 || i >= arity_) throw std::invalid_argument("column index out of range");
  Tuple c;
  c.reserve(tuples_.size());
  for (const auto& t : tuples_) c.push_back(t[i]);
  return c;
}

std::vector<Tuple> Relation::columns() const {
  std::vector<Tuple> cols;
  cols.reserve(arity_);
  for (int i = 0; i < arity_; ++i) cols.push_back(column(i));
  return cols;
}

bool Relation::operator<(const Relation& o) const {
  if (k_ != o.k_) return k_ < o.k_;
  if (arity_ != o.arity_) return arity_ < o.arity_;
  return tuples_ < o.tuples_;
}

Relation from_rows(int k, const std::vector<Tuple>& rows) {
  int n = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  return Relation(k, n, rows);
}

Relation from_columns(int k, int rows, const std::vector<Tuple>& cols) {
  std::vector<Tuple> ts(rows, Tuple(cols.size()));
  for (std::size_t p = 0; p < cols.size(); ++p) {
    if (static_cast<int>(cols[p].size()) != rows)
      throw std::invalid_argument("column height mismatch");
    for (int r = 0; r < rows; ++r) ts[r][p] = cols[p][r];
  }
  return Relation(k, static_cast<int>(cols.size()), std::move(ts));
}

Relation project(const Relation& r, const std::vector<int>& indices) {
  for (int i : indices)
    if (i < 0 || i >= r.arity()) throw std::invalid_argument("projection index out of range");
  std::vector<Tuple> out;
  out.reserve(r.size());
  for (const auto& t : r.tuples()) {
    Tuple u(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) u[j] = t[indices[j]];
    out.push_back(std::move(u));
  }
  return Relation(r.domain(), static_cast<int>(indices.size()), std::move(out));
}

RedundancyResult remove_redundant(const Relation& r) {
  auto cols = r.columns();
  std::vector<int> keep;
  std::vector<int> map(r.arity());
  for (int j = 0; j < r.arity(); ++j) {
    int found = -1;
    for (std::size_t q = 0; q < keep.size(); ++q)
      if (cols[keep[q]] == cols[j]) { found = static_cast<int>(q); break; }
    if (found < 0) {
      found = static_cast<int>(keep.size());
      keep.push_back(j);
    }
    map[j] = found;
  }
  return {project(r, keep), map};
}

unsigned column_values(const Relation& r, int i) {
  if (i < 0 || i >= r.arity()) throw std::invalid_argument("column index out of range");
  unsigned m = 0;
  for (const auto& t : r.tuples()) m |= 1u << t[i];
  return m;
}

int choice_class(const Relation& r, int i) { return popcount(column_values(r, i)); }

unsigned popcount(unsigned mask) { return static_cast<unsigned>(std::popcount(mask)); }

Relation make_rb() {
  return Relation(2, 8, {{0, 0, 1, 1, 1, 0, 0, 1}, {0, 1, 0, 1, 0, 1, 0, 1}, {1, 0, 0, 0, 1, 1, 0, 1}});
}

Relation make_rnn() { return project(make_rb(), {0, 1, 2, 3, 4, 5}); }

Relation make_rd(int k) {
  if (k < 2) throw std::invalid_argument("make_rd needs k >= 2");
  if (k == 2) return make_rb();
  std::vector<Tuple> cols;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        cols.push_back({static_cast<Value>(a), static_cast<Value>(b), static_cast<Value>(c)});
  return from_columns(k, 3, cols);
}

Tuple concat(const Tuple& s, const Tuple& t) {
  Tuple u(s);
  u.insert(u.end(), t.begin(), t.end());
  return u;
}

void Language::add(const std::string& name, const Relation& r) {
  if (name.empty()) throw std::invalid_argument("empty relation name");
  if (name == "eq" || name == "false")
    throw std::invalid_argument("relation name '" + name + "' is reserved");
  if (!rels.empty() && r.domain() != k)
    throw std::invalid_argument("relation domain differs from language domain");
  if (rels.empty()) k = r.domain();
  rels[name] = r;
}

const Relation& Language::at(const std::string& name) const {
  auto it = rels.find(name);
  if (it == rels.end()) throw std::invalid_argument("unknown relation '" + name + "'");
  return it->second;
}

int Language::max_arity() const {
  int m = 0;
  for (const auto& [_, r] : rels) m = std::max(m, r.arity());
  return m;
}

Language make_satk(int kk) {
  if (kk < 3) throw std::invalid_argument("make_satk needs clause width >= 3");
  if (kk > 16) throw std::invalid_argument("clause width too large");
  Language lang;
  lang.k = 2;
  for (unsigned ex = 0; ex < (1u << kk); ++ex) {
    std::vector<Tuple> ts;
    Tuple excluded(kk);
    for (int i = 0; i < kk; ++i) excluded[i] = (ex >> (kk - 1 - i)) & 1u;
    for (unsigned m = 0; m < (1u << kk); ++m) {
      if (m == ex) continue;
      Tuple t(kk);
      for (int i = 0; i < kk; ++i) t[i] = (m >> (kk - 1 - i)) & 1u;
      ts.push_back(t);
    }
    std::string name = "sat_not_";
    for (Value v : excluded) name += static_cast<char>('0' + v);
    lang.add(name, Relation(2, kk, std::move(ts)));
  }
  return lang;
}

Relation eq_relation(int k) {
  std::vector<Tuple> ts;
  for (int d = 0; d < k; ++d) ts.push_back({static_cast<Value>(d), static_cast<Value>(d)});
  return Relation(k, 2, std::move(ts));
}

Relation constant_relation(int k, int d) {
  if (d < 0 || d >= k) throw std::invalid_argument("constant outside domain");
  return Relation(k, 1, {{static_cast<Value>(d)}});
}

Relation unary_relation(int k, unsigned mask) {
  std::vector<Tuple> ts;
  for (int d = 0; d < k; ++d)
    if (mask >> d & 1u) ts.push_back({static_cast<Value>(d)});
  if (mask >> k) throw std::invalid_argument("unary mask outside domain");
  return Relation(k, 1, std::move(ts));
}

Relation empty_relation(int k, int arity) { return Relation(k, arity, {}); }

std::string unary_name(unsigned mask) {
  if (mask == 0) return "in_none";
  if (popcount(mask) == 1) return "c" + std::to_string(std::countr_zero(mask));
  std::string s = "in";
  for (int d = 0; d < 32; ++d)
    if (mask >> d & 1u) s += "_" + std::to_string(d);
  return s;
}

Language all_unary(int k) {
  Language lang;
  lang.k = k;
  for (unsigned m = 0; m < (1u << k); ++m) lang.add(unary_name(m), unary_relation(k, m));
  return lang;
}

void write_relation(std::ostream& os, const std::string& name, const Relation& r) {
  os << "rel " << name << " domain " << r.domain() << " arity " << r.arity() << " tuples "
     << r.size() << "\n";
  for (const auto& t : r.tuples()) {
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << int(t[i]);
    os << "\n";
  }
}

namespace {
void expect(std::istream& is, const std::string& word) {
  std::string w;
  if (!(is >> w) || w != word)
    throw std::invalid_argument("relation text: expected '" + word + "', got '" + w + "'");
}
}  // namespace

std::pair<std::string, Relation> read_relation(std::istream& is) {
  expect(is, "rel");
  std::string name;
  int k = 0, n = 0, m = 0;
  is >> name;
  expect(is, "domain");
  is >> k;
  expect(is, "arity");
  is >> n;
  expect(is, "tuples");
  is >> m;
  if (!is || k < 1 || n < 0 || m < 0) throw std::invalid_argument("relation text: bad header");
  std::vector<Tuple> ts(m, Tuple(n));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i < n; ++i) {
      int v;
      if (!(is >> v)) throw std::invalid_argument("relation text: truncated tuple list");
      if (v < 0 || v >= k) throw std::invalid_argument("relation text: value outside domain");
      ts[r][i] = static_cast<Value>(v);
    }
  return {name, Relation(k, n, std::move(ts))};
}

Language read_language(std::istream& is) {
  Language lang;
  std::string w;
  while (is >> std::ws && is.peek() != EOF) {
    if (is.peek() == '#') {
      std::getline(is, w);
      continue;
    }
    auto [name, r] = read_relation(is);
    lang.add(name, r);
  }
  return lang;
}

std::string to_string(const Relation& r) {
  std::ostringstream os;
  os << "{";
  for (std::size_t j = 0; j < r.size(); ++j) {
    os << (j ? ",(" : "(");
    for (int i = 0; i < r.arity(); ++i) os << (i ? "," : "") << int(r[j][i]);
    os << ")";
  }
  os << "}";
  return os.str();
}

std::string to_matrix_string(const Relation& r) {
  std::ostringstream os;
  for (const auto& t : r.tuples()) {
    for (int i = 0; i < r.arity(); ++i) os << (i ? " " : "") << int(t[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace gcsp
