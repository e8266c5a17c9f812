#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "galois_csp/reductions.hpp"
#include "reduce_common.hpp"

namespace gcsp {

namespace {

std::vector<char> matching_rels(const Instance& inst, const Relation& r) {
  std::vector<char> m(inst.rels.size(), 0);
  for (std::size_t i = 0; i < inst.rels.size(); ++i) m[i] = inst.rels[i] == r;
  return m;
}

void replace_var(Instance& w, int from, int to) {
  for (auto& c : w.constraints)
    for (int& v : c.vars)
      if (v == from) v = to;
}

std::string fresh_name(const Instance& inst, std::string name, const Relation& r) {
  for (;;) {
    int i = inst.find_relation(name);
    if (i < 0 || inst.rels[i] == r) return name;
    name += "'";
  }
}

Tuple triple(const Relation& r, int p, const std::array<int, 3>& rows) {
  return {r[rows[0]][p], r[rows[1]][p], r[rows[2]][p]};
}

}  // namespace

Reduced dedup_3choice(const Instance& inst, const Relation& r) {
  inst.validate();
  if (r.size() != 3) throw std::invalid_argument("dedup_3choice needs a 3-tuple relation");
  if (!is_saturated(r).saturated) throw std::invalid_argument("dedup_3choice needs a saturated relation");
  Instance w = inst;
  auto is_r = matching_rels(w, r);
  std::vector<char> three(r.arity());
  for (int p = 0; p < r.arity(); ++p) three[p] = choice_class(r, p) == 3;
  int rounds = 0;
  for (;;) {
    // first variable that is 3-choice in two different constraints
    int c1 = -1, c2 = -1, i1 = -1, i2 = -1;
    std::vector<std::pair<int, int>> first(w.num_vars, {-1, -1});
    for (int c = 0; c < static_cast<int>(w.constraints.size()) && c2 < 0; ++c) {
      if (!is_r[w.constraints[c].rel]) continue;
      const auto& vs = w.constraints[c].vars;
      for (int p = 0; p < r.arity() && c2 < 0; ++p) {
        if (!three[p]) continue;
        auto& f = first[vs[p]];
        if (f.first < 0) f = {c, p};
        else if (f.first != c) {
          c1 = f.first;
          i1 = f.second;
          c2 = c;
          i2 = p;
        }
      }
    }
    if (c2 < 0) break;
    ++rounds;
    std::array<int, 3> sigma{-1, -1, -1};
    std::vector<int> in_a;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (r[b][i2] == r[a][i1]) {
          sigma[a] = b;
          in_a.push_back(a);
        }
    if (in_a.empty()) {
      Instance u = canonical_unsat(inst.k, r.arity());
      return {u, detail::make_report("dedup_3choice", inst, u)};
    }
    std::array<int, 3> tau = sigma;
    std::vector<char> used(3, 0);
    for (int a : in_a) used[sigma[a]] = 1;
    for (int a = 0; a < 3; ++a)
      if (tau[a] < 0)
        for (int b = 0; b < 3; ++b)
          if (!used[b]) {
            tau[a] = b;
            used[b] = 1;
            break;
          }
    const auto xs = w.constraints[c1].vars;
    const auto ys = w.constraints[c2].vars;
    UnionFind uf(w.num_vars);
    for (int p = 0; p < r.arity(); ++p) {
      int q = find_column(r, triple(r, p, tau));
      if (q < 0) throw InternalError("dedup_3choice: saturation image missing");
      uf.unite(ys[p], xs[q]);
    }
    if (in_a.size() < 3) {
      Tuple col(3);
      for (int a = 0; a < 3; ++a) col[a] = sigma[a] >= 0 ? r[a][i1] : r[in_a[0]][i1];
      int q = find_column(r, col);
      if (q < 0) throw InternalError("dedup_3choice: filter column missing");
      uf.unite(xs[i1], xs[q]);
    }
    w.constraints.erase(w.constraints.begin() + c2);
    apply_identification(w, uf);
  }
  Reduced res{w, detail::make_report("dedup_3choice", inst, w)};
  res.report.notes.push_back("rounds " + std::to_string(rounds));
  return res;
}

namespace {

// Position-removal state; constraints are marked dead instead of erased so
// indices stay valid within a round.
class Remover {
 public:
  Remover(Instance w, const Relation& r, const std::vector<int>& keep, bool drop_style, bool literal)
      : w_(std::move(w)), r_(r), keep_(keep), drop_(drop_style), literal_(literal) {
    is_r_ = matching_rels(w_, r_);
    kept_.assign(r.arity(), 0);
    for (int p : keep) kept_[p] = 1;
    xhat_start_ = w_.num_vars;
    dead_.assign(w_.constraints.size(), 0);
  }

  bool unsat() const { return unsat_; }
  std::vector<std::string> notes;

  void run() {
    while (!unsat_) {
      if (drop_ && needs_dedup()) {
        compact();
        auto d = dedup_3choice(w_, r_);
        if (is_canonical_unsat(d.instance)) {
          unsat_ = true;
          return;
        }
        w_ = d.instance;
        is_r_ = matching_rels(w_, r_);
        dead_.assign(w_.constraints.size(), 0);
        notes.push_back("dedup applied");
      }
      int ci = -1, i = -1;
      for (int c = 0; c < ncons() && ci < 0; ++c) {
        if (dead_[c] || !is_r_[w_.constraints[c].rel]) continue;
        for (int p = 0; p < r_.arity(); ++p)
          if (!kept_[p] && w_.constraints[c].vars[p] < xhat_start_) {
            ci = c;
            i = p;
            break;
          }
      }
      if (ci < 0) break;
      step(ci, i);
    }
  }

  Instance output(const std::string& out_name) {
    compact();
    Relation rp = project(r_, keep_);
    Instance out;
    out.k = w_.k;
    out.num_vars = xhat_start_;
    std::string name = fresh_name(w_, out_name, rp);
    for (const auto& c : w_.constraints) {
      std::vector<int> vs;
      int rel;
      if (is_r_[c.rel]) {
        for (int p : keep_) vs.push_back(c.vars[p]);
        rel = out.add_relation(name, rp);
      } else {
        vs = c.vars;
        rel = out.add_relation(w_.rel_names[c.rel], w_.rels[c.rel]);
      }
      for (int v : vs)
        if (v >= xhat_start_) throw InternalError("remove_positions: placeholder variable survived");
      out.add_constraint(rel, std::move(vs));
    }
    return out;
  }

 private:
  int ncons() const { return static_cast<int>(w_.constraints.size()); }

  void compact() {
    std::vector<Constraint> keep;
    for (int c = 0; c < ncons(); ++c)
      if (!dead_[c]) keep.push_back(w_.constraints[c]);
    w_.constraints = std::move(keep);
    dead_.assign(w_.constraints.size(), 0);
  }

  bool needs_dedup() const {
    std::vector<int> owner(w_.num_vars, -1);
    for (int c = 0; c < ncons(); ++c) {
      if (dead_[c] || !is_r_[w_.constraints[c].rel]) continue;
      for (int p = 0; p < r_.arity(); ++p) {
        if (choice_class(r_, p) != 3) continue;
        int v = w_.constraints[c].vars[p];
        if (owner[v] >= 0 && owner[v] != c) return true;
        owner[v] = c;
      }
    }
    return false;
  }

  int new_xhat() { return w_.num_vars++; }

  void add_unary(int v, unsigned mask) {
    int rel = w_.add_relation(unary_name(mask), unary_relation(w_.k, mask));
    w_.add_constraint(rel, {v});
    dead_.push_back(0);
    is_r_.resize(w_.rels.size(), 0);
  }

  // Restricts constraint c to the rows in `rows` (bitmask over 0..2). Returns
  // false when the constraint was removed or the instance became unsat.
  bool restrict_rows(int c, unsigned rows) {
    const int cnt = popcount(rows);
    if (cnt == 3) return true;
    if (cnt == 0) {
      unsat_ = true;
      return false;
    }
    const auto vs = w_.constraints[c].vars;
    if (cnt == 1) {
      int row = __builtin_ctz(rows);
      for (int p = 0; p < r_.arity(); ++p)
        if (vs[p] < xhat_start_) add_unary(vs[p], 1u << r_[row][p]);
      dead_[c] = 1;
      return false;
    }
    int a = -1, b = -1, o = -1;
    for (int t = 0; t < 3; ++t) {
      if (rows >> t & 1u) (a < 0 ? a : b) = t;
      else o = t;
    }
    for (int s : keep_)
      if (r_[a][s] == r_[b][s] && r_[o][s] != r_[a][s]) {
        add_unary(vs[s], 1u << r_[a][s]);
        return true;
      }
    throw InternalError("remove_positions: no separating column among kept positions");
  }

  unsigned rows_with(int p, unsigned values) const {
    unsigned m = 0;
    for (int t = 0; t < 3; ++t)
      if (values >> r_[t][p] & 1u) m |= 1u << t;
    return m;
  }

  // Kept column equal to g(column p) on the rows in `rows`.
  int kept_column_like(int p, unsigned rows, const std::array<int, 256>& g, int avoid) const {
    for (int q : keep_) {
      if (q == avoid) continue;
      bool ok = true;
      for (int t = 0; t < 3 && ok; ++t)
        if (rows >> t & 1u) ok = r_[t][q] == g[r_[t][p]];
      if (ok) return q;
    }
    return -1;
  }

  void step(int ci, int i) {
    const int x = w_.constraints[ci].vars[i];
    // another position of the same constraint
    for (int j = 0; j < r_.arity(); ++j) {
      if (j == i || w_.constraints[ci].vars[j] != x) continue;
      unsigned l = 0;
      for (int t = 0; t < 3; ++t)
        if (r_[t][i] == r_[t][j]) l |= 1u << t;
      if (restrict_rows(ci, l)) w_.constraints[ci].vars[i] = new_xhat();
      return;
    }
    int c2 = -1, j = -1;
    unsigned unary = (1u << w_.k) - 1;
    bool has_unary = false;
    for (int c = 0; c < ncons(); ++c) {
      if (dead_[c] || c == ci) continue;
      const auto& con = w_.constraints[c];
      const Relation& rel = w_.rels[con.rel];
      for (std::size_t p = 0; p < con.vars.size(); ++p) {
        if (con.vars[p] != x) continue;
        if (rel.arity() == 1) {
          has_unary = true;
          unary &= column_values(rel, 0);
        } else if (!is_r_[con.rel]) {
          throw UnsupportedError("remove_positions: variable occurs in a constraint over another relation");
        } else if (c2 < 0) {
          c2 = c;
          j = static_cast<int>(p);
        }
      }
    }
    if (c2 < 0) {
      unsigned rows = has_unary ? rows_with(i, unary) : 7u;
      if (restrict_rows(ci, rows)) w_.constraints[ci].vars[i] = new_xhat();
      return;
    }
    const unsigned s = column_values(r_, i) & column_values(r_, j);
    if (s == 0) {
      unsat_ = true;
      return;
    }
    if (popcount(s) == 3) return;  // two 3-choice occurrences; the next round dedups
    if (popcount(s) == 1) {
      bool keep1 = restrict_rows(c2, rows_with(j, s));
      if (unsat_) return;
      bool keep2 = restrict_rows(ci, rows_with(i, s));
      (void)keep1;
      if (keep2) w_.constraints[ci].vars[i] = new_xhat();
      return;
    }
    if (drop_) {
      const unsigned rows = rows_with(i, s);
      if (!literal_ && !restrict_rows(ci, rows)) return;
      std::array<int, 256> id{};
      std::iota(id.begin(), id.end(), 0);
      int ip = kept_column_like(i, rows, id, i);
      if (ip < 0) throw InternalError("remove_positions: no substitute column");
      int y = w_.constraints[ci].vars[ip];
      w_.constraints[ci].vars[i] = new_xhat();
      replace_var(w_, x, y);
      return;
    }
    const unsigned rows1 = rows_with(i, s), rows2 = rows_with(j, s);
    if (!restrict_rows(c2, rows2)) return;
    if (!restrict_rows(ci, rows1)) return;
    const int s1 = __builtin_ctz(s), s2 = 31 - __builtin_clz(s);
    for (int a = 0; a < w_.k; ++a)
      for (int b = 0; b < w_.k; ++b) {
        if (a == b) continue;
        std::array<int, 256> g;
        g.fill(-1);
        g[s1] = a;
        g[s2] = b;
        int l = kept_column_like(i, rows1, g, -1);
        int m = kept_column_like(j, rows2, g, -1);
        if (l < 0 || m < 0) continue;
        int y = w_.constraints[ci].vars[l];
        int z = w_.constraints[c2].vars[m];
        w_.constraints[ci].vars[i] = new_xhat();
        if (y != z) replace_var(w_, z, y);
        return;
      }
    throw InternalError("remove_positions: no value-collapse columns");
  }

  Instance w_;
  Relation r_;
  std::vector<int> keep_;
  bool drop_, literal_;
  std::vector<char> is_r_, kept_, dead_;
  int xhat_start_;
  bool unsat_ = false;
};

}  // namespace

Reduced remove_positions(const Instance& inst, const Relation& r, const std::vector<int>& keep, const CvOptions& opts) {
  inst.validate();
  if (r.size() != 3) throw std::invalid_argument("remove_positions needs a 3-tuple relation");
  std::vector<char> kept(r.arity(), 0);
  for (int p : keep) {
    if (p < 0 || p >= r.arity() || kept[p]) throw std::invalid_argument("remove_positions: bad keep list");
    kept[p] = 1;
  }
  int n3 = 0, nother = 0;
  for (int p = 0; p < r.arity(); ++p)
    if (!kept[p]) (choice_class(r, p) == 3 ? n3 : nother)++;
  if (n3 && nother) throw std::invalid_argument("remove_positions: cannot remove 3-choice and other positions together");
  const bool drop = n3 > 0;
  Relation rp = project(r, keep);
  if (drop && (!is_saturated(r).saturated || !is_saturated(rp).saturated))
    throw std::invalid_argument("drop: both relations must be saturated");
  Remover rm(inst, r, keep, drop, opts.literal);
  rm.run();
  Instance out = rm.unsat() ? canonical_unsat(inst.k, rp.arity()) : rm.output(opts.out_name);
  Reduced res{out, detail::make_report(drop ? "drop_3choice_args" : "add_2choice_args", inst, out)};
  for (auto& n : rm.notes) res.report.notes.push_back(n);
  for (const auto& c : out.constraints)
    if (out.rels[c.rel].arity() == 1 && out.rel_names[c.rel][0] == 'c') {
      res.report.notes.push_back("target includes constant relations");
      break;
    }
  return res;
}

Reduced drop_3choice_args(const Instance& inst, const Relation& r, const Relation& r_small, const CvOptions& opts) {
  std::vector<int> keep(r_small.arity());
  std::iota(keep.begin(), keep.end(), 0);
  if (r_small.arity() > r.arity() || project(r, keep) != r_small)
    throw std::invalid_argument("drop_3choice_args: smaller relation must be a prefix projection");
  for (int p = r_small.arity(); p < r.arity(); ++p)
    if (choice_class(r, p) != 3) throw std::invalid_argument("drop_3choice_args: removed positions must be 3-choice");
  return remove_positions(inst, r, keep, opts);
}

Reduced add_2choice_args(const Instance& inst, const Relation& r_big, const Relation& r, const CvOptions& opts) {
  std::vector<int> keep(r.arity());
  std::iota(keep.begin(), keep.end(), 0);
  if (r.arity() > r_big.arity() || project(r_big, keep) != r)
    throw std::invalid_argument("add_2choice_args: smaller relation must be a prefix projection");
  for (int p = r.arity(); p < r_big.arity(); ++p)
    if (choice_class(r_big, p) == 3) throw std::invalid_argument("add_2choice_args: appended positions must not be 3-choice");
  return remove_positions(inst, r_big, keep, opts);
}

namespace {

// Row permutation rows[] with to[t] matched to from[rows[t]], such that the
// column triples of both relations form the same set.
std::optional<std::array<int, 3>> align_rows(const Relation& from, const Relation& to) {
  std::array<int, 3> perm{0, 1, 2};
  std::set<Tuple> fc;
  for (int q = 0; q < from.arity(); ++q) fc.insert(triple(from, q, {0, 1, 2}));
  do {
    std::set<Tuple> tc;
    for (int p = 0; p < to.arity(); ++p) {
      Tuple col(3);
      for (int t = 0; t < 3; ++t) col[perm[t]] = to[t][p];
      tc.insert(col);
    }
    if (tc == fc) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace

Instance rewrite_by_columns(const Instance& inst, const Relation& from, const Relation& to, const std::string& out_name) {
  if (from.size() != 3 || to.size() != 3) throw std::invalid_argument("rewrite_by_columns needs 3-tuple relations");
  auto perm = align_rows(from, to);
  if (!perm) throw std::invalid_argument("rewrite_by_columns: relations have different column sets");
  std::map<Tuple, int> first;
  std::vector<int> rep(from.arity());
  for (int q = 0; q < from.arity(); ++q) rep[q] = first.emplace(triple(from, q, {0, 1, 2}), q).first->second;
  std::vector<int> src(to.arity());
  for (int p = 0; p < to.arity(); ++p) {
    Tuple col(3);
    for (int t = 0; t < 3; ++t) col[(*perm)[t]] = to[t][p];
    src[p] = first.at(col);
  }
  Instance out;
  out.k = inst.k;
  out.num_vars = inst.num_vars;
  UnionFind uf(inst.num_vars);
  std::string name = fresh_name(inst, out_name, to);
  for (const auto& c : inst.constraints) {
    if (inst.rels[c.rel] != from) {
      out.add_constraint(out.add_relation(inst.rel_names[c.rel], inst.rels[c.rel]), c.vars);
      continue;
    }
    for (int q = 0; q < from.arity(); ++q) uf.unite(c.vars[q], c.vars[rep[q]]);
    std::vector<int> vs(to.arity());
    for (int p = 0; p < to.arity(); ++p) vs[p] = c.vars[src[p]];
    out.add_constraint(out.add_relation(name, to), std::move(vs));
  }
  apply_identification(out, uf);
  return out;
}

namespace {

std::vector<Tuple> columns_in_row_order(const Relation& from, const std::array<int, 3>& rows) {
  std::vector<Tuple> out;
  for (int q = 0; q < from.arity(); ++q) out.push_back(triple(from, q, rows));
  return out;
}

// Row order of `base` such that every column of base is a column of `host`.
std::array<int, 3> embed_rows(const Relation& host, const Relation& base) {
  std::set<Tuple> hc;
  for (int q = 0; q < host.arity(); ++q) hc.insert(triple(host, q, {0, 1, 2}));
  std::array<int, 3> perm{0, 1, 2};
  do {
    bool ok = true;
    for (int p = 0; p < base.arity() && ok; ++p) {
      Tuple col(3);
      for (int t = 0; t < 3; ++t) col[perm[t]] = base[t][p];
      ok = hc.count(col) > 0;
    }
    if (ok) {
      // host row perm[t] plays base row t; return host rows in base order
      return perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw std::invalid_argument("relation columns do not embed");
}

// base's columns followed by the columns of `host` (read in base's row order)
// that base lacks and that satisfy `pick`.
template <class Pick>
Relation extend_with(const Relation& base, const Relation& host, Pick pick) {
  auto perm = embed_rows(host, base);
  std::vector<Tuple> cols = base.columns();
  std::set<Tuple> have(cols.begin(), cols.end());
  for (const auto& c : columns_in_row_order(host, perm))
    if (!have.count(c) && pick(c)) {
      have.insert(c);
      cols.push_back(c);
    }
  return from_columns(base.domain(), 3, cols);
}

bool is_three_choice(const Tuple& c) { return c[0] != c[1] && c[1] != c[2] && c[0] != c[2]; }

Reduced chain(const Instance& start, std::vector<Reduced>& steps, Instance cur, const std::string& name) {
  Reduced res;
  res.instance = std::move(cur);
  res.report = detail::make_report(name, start, res.instance);
  for (auto& s : steps) {
    res.report.notes.push_back(s.report.step + ": vars " + std::to_string(s.report.vars_in) + " -> " +
                               std::to_string(s.report.vars_out));
    for (auto& n : s.report.notes) res.report.notes.push_back("  " + n);
  }
  return res;
}

}  // namespace

Reduced lift_rd(const Instance& inst, const Relation& r, LiftOrder order, const CvOptions& opts) {
  inst.validate();
  const int k = r.domain();
  if (inst.k != k) throw std::invalid_argument("lift_rd: domain mismatch");
  if (r.size() != 3 || !is_saturated(r).saturated) throw std::invalid_argument("lift_rd: relation must be saturated");
  if (!detect_rb_extension(r)) throw std::invalid_argument("lift_rd: relation is not an R^B-extension");
  const Relation rd = make_rd(k);
  for (const auto& c : inst.constraints) {
    const auto& rel = inst.rels[c.rel];
    if (rel != rd && rel.arity() != 1) throw std::invalid_argument("lift_rd: instance must be over make_rd(k) and unary relations");
  }
  std::vector<Reduced> steps;
  auto record = [&](Reduced red) {
    Instance next = red.instance;
    steps.push_back(std::move(red));
    return next;
  };
  auto is_unsat = [](const Instance& i) { return is_canonical_unsat(i); };

  bool has3 = false;
  for (int p = 0; p < r.arity(); ++p) has3 |= choice_class(r, p) == 3;

  if (has3) {
    struct Stage {
      Relation s, s_prime;
      std::vector<int> keep_drop, keep_add;
    };
    std::vector<Stage> stages;
    Relation cur = r;
    std::set<Relation> seen{cur};
    for (;;) {
      std::set<unsigned> present;
      for (int p = 0; p < cur.arity(); ++p)
        if (choice_class(cur, p) == 3) present.insert(column_values(cur, p));
      int d1 = -1, d2 = -1, d3 = -1;
      for (int a = 0; a < k && d1 < 0; ++a)
        for (int b = a + 1; b < k && d1 < 0; ++b)
          for (int c = b + 1; c < k && d1 < 0; ++c)
            if (!present.count((1u << a) | (1u << b) | (1u << c))) {
              d1 = a;
              d2 = b;
              d3 = c;
            }
      if (d1 < 0) break;
      auto cols = cur.columns();
      cols.push_back({static_cast<Value>(d1), static_cast<Value>(d2), static_cast<Value>(d3)});
      Relation s = saturate(from_columns(k, 3, cols)).relation;
      const unsigned mask = (1u << d1) | (1u << d2) | (1u << d3);
      Stage st;
      st.s = s;
      for (int p = 0; p < s.arity(); ++p)
        if (!(choice_class(s, p) == 3 && column_values(s, p) == mask)) st.keep_drop.push_back(p);
      st.s_prime = project(s, st.keep_drop);
      st.keep_add.resize(cur.arity());
      std::iota(st.keep_add.begin(), st.keep_add.end(), 0);
      if (project(st.s_prime, st.keep_add) != cur) throw InternalError("lift_rd: stage does not extend the previous relation");
      if (!seen.insert(s).second) throw InternalError("lift_rd: stage repeated");
      stages.push_back(std::move(st));
      cur = s;
    }
    Instance w = rewrite_by_columns(inst, rd, cur, stages.empty() ? opts.out_name : "lift" + std::to_string(stages.size()));
    for (std::size_t t = stages.size(); t-- > 0 && !is_unsat(w);) {
      const auto& st = stages[t];
      CvOptions o = opts;
      o.out_name = "lift_mid" + std::to_string(t);
      w = record(remove_positions(w, st.s, st.keep_drop, o));
      if (is_unsat(w)) break;
      o.out_name = t == 0 ? opts.out_name : "lift" + std::to_string(t);
      w = record(remove_positions(w, st.s_prime, st.keep_add, o));
    }
    auto res = chain(inst, steps, w, "lift_rd");
    res.report.notes.insert(res.report.notes.begin(), "3-choice path with " + std::to_string(stages.size()) + " stages");
    return res;
  }

  std::vector<int> base(r.arity());
  std::iota(base.begin(), base.end(), 0);
  if (order == LiftOrder::drop_then_add) {
    std::vector<int> low;
    for (int p = 0; p < rd.arity(); ++p)
      if (choice_class(rd, p) != 3) low.push_back(p);
    CvOptions o = opts;
    o.out_name = "rd_low";
    Instance w = inst;
    Relation rd_low = project(rd, low);
    if (static_cast<int>(low.size()) != rd.arity()) w = record(remove_positions(w, rd, low, o));
    if (!is_unsat(w)) {
      Relation t = extend_with(r, rd_low, [](const Tuple&) { return true; });
      w = rewrite_by_columns(w, rd_low, t, "lift_ext");
      o.out_name = opts.out_name;
      w = record(remove_positions(w, t, base, o));
    }
    auto res = chain(inst, steps, w, "lift_rd");
    res.report.notes.insert(res.report.notes.begin(), "no 3-choice positions: drop then add");
    return res;
  }
  Relation full = extend_with(r, rd, [](const Tuple&) { return true; });
  Relation mid = extend_with(r, rd, is_three_choice);
  if (!is_saturated(mid).saturated)
    throw UnsupportedError("lift_rd: add-then-drop needs the intermediate relation (R plus the 3-choice columns) to be saturated");
  Instance w = rewrite_by_columns(inst, rd, full, "lift_ext");
  std::vector<int> keep_mid;
  for (int p = 0; p < full.arity(); ++p) {
    Tuple c = triple(full, p, {0, 1, 2});
    if (p < r.arity() || is_three_choice(c)) keep_mid.push_back(p);
  }
  CvOptions o = opts;
  o.out_name = "lift_mid";
  if (static_cast<int>(keep_mid.size()) != full.arity()) w = record(remove_positions(w, full, keep_mid, o));
  if (!is_unsat(w) && mid.arity() != r.arity()) {
    o.out_name = opts.out_name;
    w = record(remove_positions(w, mid, base, o));
  }
  auto res = chain(inst, steps, w, "lift_rd");
  res.report.notes.insert(res.report.notes.begin(), "no 3-choice positions: add then drop");
  return res;
}

Reduced eliminate_unary(const Instance& inst) {
  inst.validate();
  const Relation rd = make_rd(inst.k);
  Instance w = inst;
  for (const auto& c : w.constraints) {
    const auto& rel = w.rels[c.rel];
    if (rel != rd && rel.arity() != 1 && !(rel.arity() == 0))
      throw std::invalid_argument("eliminate_unary: instance must be over make_rd(k) and unary relations");
    if (rel.arity() == 0 && rel.empty()) {
      Instance u = canonical_unsat(inst.k, rd.arity());
      return {u, detail::make_report("eliminate_unary", inst, u)};
    }
  }
  auto unsat = [&] {
    Instance u = canonical_unsat(inst.k, rd.arity());
    return Reduced{u, detail::make_report("eliminate_unary", inst, u)};
  };
  auto drop_unary = [&](int x) {
    std::vector<Constraint> keep;
    for (auto& c : w.constraints)
      if (!(w.rels[c.rel].arity() == 1 && c.vars[0] == x)) keep.push_back(c);
    w.constraints = std::move(keep);
  };
  for (;;) {
    int x = -1;
    unsigned e = (1u << w.k) - 1;
    for (const auto& c : w.constraints)
      if (w.rels[c.rel].arity() == 1 && (x < 0 || c.vars[0] < x)) x = c.vars[0];
    if (x < 0) break;
    for (const auto& c : w.constraints)
      if (w.rels[c.rel].arity() == 1 && c.vars[0] == x) e &= column_values(w.rels[c.rel], 0);
    int ci = -1, i = -1;
    for (int c = 0; c < static_cast<int>(w.constraints.size()) && ci < 0; ++c) {
      if (w.rels[w.constraints[c].rel] != rd) continue;
      for (int p = 0; p < rd.arity(); ++p)
        if (w.constraints[c].vars[p] == x) {
          ci = c;
          i = p;
          break;
        }
    }
    if (ci < 0) {
      if (e == 0) return unsat();
      drop_unary(x);
      continue;
    }
    const unsigned proj = column_values(rd, i), in = e & proj;
    if (in == 0) return unsat();
    const auto vs = w.constraints[ci].vars;
    drop_unary(x);
    if (in == proj) continue;
    Tuple col(3);
    if (popcount(in) == 1) {
      Value v = static_cast<Value>(__builtin_ctz(in));
      col = {v, v, v};
    } else {
      int s = -1;
      for (int t = 0; t < 3; ++t)
        if (in >> rd[t][i] & 1u) {
          if (s < 0) s = t;
          col[t] = rd[t][i];
        } else {
          col[t] = 255;
        }
      for (auto& v : col)
        if (v == 255) v = rd[s][i];
    }
    int j = find_column(rd, col);
    if (j < 0) throw InternalError("eliminate_unary: column missing from make_rd");
    if (vs[j] != x) replace_var(w, x, vs[j]);
  }
  Instance out;
  out.k = w.k;
  out.num_vars = w.num_vars;
  for (const auto& c : w.constraints)
    if (w.rels[c.rel].arity() > 1) out.add_constraint(out.add_relation(w.rel_names[c.rel], w.rels[c.rel]), c.vars);
  return {out, detail::make_report("eliminate_unary", inst, out)};
}

}  // namespace gcsp
