#include "galois_csp/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "galois_csp/relation.hpp"

namespace gcsp {

std::string to_string(Status s) {
  switch (s) {
    case Status::sat: return "sat";
    case Status::unsat: return "unsat";
    default: return "unknown";
  }
}

namespace {

using Clock = std::chrono::steady_clock;

class Budget {
 public:
  explicit Budget(const SolveOptions& o) : o_(o), start_(Clock::now()) {}
  // Counts one node; returns false once a limit is hit.
  bool tick(std::uint64_t& nodes) {
    ++nodes;
    if (nodes > o_.node_budget) return false;
    if (o_.time_budget_ms > 0 && (nodes & 1023) == 0 && elapsed() > o_.time_budget_ms) return false;
    return true;
  }
  double elapsed() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  SolveOptions o_;
  Clock::time_point start_;
};

// Shared chronological search used by brute_force and count_solutions.
class Backtracker {
 public:
  explicit Backtracker(const Instance& inst) : inst_(inst), val_(inst.num_vars, -1), watch_(inst.num_vars) {
    std::vector<char> seen(inst.num_vars, 0);
    for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
      std::set<int> vs(inst.constraints[c].vars.begin(), inst.constraints[c].vars.end());
      for (int v : vs) watch_[v].push_back(static_cast<int>(c));
      for (int v : inst.constraints[c].vars)
        if (!seen[v]) {
          seen[v] = 1;
          order_.push_back(v);
        }
    }
    for (int v = 0; v < inst.num_vars; ++v)
      if (!seen[v]) isolated_.push_back(v);
  }

  bool nullary_ok() const {
    for (const auto& c : inst_.constraints)
      if (c.vars.empty() && inst_.rels[c.rel].empty()) return false;
    return true;
  }

  bool compatible(int c) const {
    const auto& con = inst_.constraints[c];
    for (const auto& t : inst_.rels[con.rel].tuples()) {
      bool ok = true;
      for (std::size_t i = 0; i < con.vars.size() && ok; ++i) {
        int v = val_[con.vars[i]];
        if (v >= 0 && v != t[i]) ok = false;
      }
      if (ok) return true;
    }
    return false;
  }

  bool ok_after(int v) const {
    for (int c : watch_[v])
      if (!compatible(c)) return false;
    return true;
  }

  // visit returns true to stop the search.
  template <class Visit>
  bool search(std::size_t i, Budget& budget, std::uint64_t& nodes, bool& aborted, Visit&& visit) {
    if (!budget.tick(nodes)) {
      aborted = true;
      return true;
    }
    if (i == order_.size()) return visit();
    int v = order_[i];
    for (int d = 0; d < inst_.k; ++d) {
      val_[v] = d;
      if (ok_after(v) && search(i + 1, budget, nodes, aborted, visit)) {
        return true;
      }
    }
    val_[v] = -1;
    return false;
  }

  const std::vector<int>& values() const { return val_; }
  std::size_t isolated_count() const { return isolated_.size(); }

 private:
  const Instance& inst_;
  std::vector<int> val_;
  std::vector<std::vector<int>> watch_;
  std::vector<int> order_, isolated_;
};

Assignment to_model(const std::vector<int>& vals) {
  Assignment a(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) a[i] = static_cast<Value>(vals[i] < 0 ? 0 : vals[i]);
  return a;
}

void verify_model(const Instance& inst, const SolveResult& r) {
  if (r.status == Status::sat && (!r.model || !inst.satisfied_by(*r.model)))
    throw InternalError("solver returned a model that does not verify");
}

}  // namespace

SolveResult brute_force(const Instance& inst, const SolveOptions& opts) {
  inst.validate();
  SolveResult res;
  Budget budget(opts);
  Backtracker bt(inst);
  if (!bt.nullary_ok()) {
    res.status = Status::unsat;
    res.node_count = 1;
    return res;
  }
  bool aborted = false;
  bool found = bt.search(0, budget, res.node_count, aborted, [&] { return true; });
  if (aborted) {
    res.status = Status::unknown;
    res.warnings.push_back("budget exceeded");
  } else if (found) {
    res.status = Status::sat;
    res.model = to_model(bt.values());
  } else {
    res.status = Status::unsat;
  }
  res.time_ms = budget.elapsed();
  verify_model(inst, res);
  return res;
}

std::uint64_t count_solutions(const Instance& inst) {
  inst.validate();
  Backtracker bt(inst);
  if (!bt.nullary_ok()) return 0;
  Budget budget(SolveOptions{});
  std::uint64_t nodes = 0, count = 0;
  bool aborted = false;
  bt.search(0, budget, nodes, aborted, [&] {
    ++count;
    return false;
  });
  for (std::size_t i = 0; i < bt.isolated_count(); ++i) {
    if (count > UINT64_MAX / static_cast<std::uint64_t>(inst.k)) return UINT64_MAX;
    count *= static_cast<std::uint64_t>(inst.k);
  }
  return count;
}

namespace {

// Unary constraints folded into per-variable domain masks.
std::vector<unsigned> unary_domains(const Instance& inst, bool& nullary_false) {
  std::vector<unsigned> dom(inst.num_vars, (1u << inst.k) - 1);
  nullary_false = false;
  for (const auto& c : inst.constraints) {
    const auto& r = inst.rels[c.rel];
    if (r.arity() == 0 && r.empty()) nullary_false = true;
    if (r.arity() != 1) continue;
    unsigned m = 0;
    for (const auto& t : r.tuples()) m |= 1u << t[0];
    dom[c.vars[0]] &= m;
  }
  return dom;
}

class GenericBrancher {
 public:
  GenericBrancher(const Instance& inst, Budget& budget, SolveResult& res)
      : inst_(inst), budget_(budget), res_(res), val_(inst.num_vars, -1) {
    dom_ = unary_domains(inst, nullary_false_);
    for (std::size_t c = 0; c < inst.constraints.size(); ++c)
      if (inst.rels[inst.constraints[c].rel].arity() >= 2) big_.push_back(static_cast<int>(c));
  }

  bool run() {
    if (nullary_false_) return false;
    return rec();
  }
  bool aborted() const { return aborted_; }
  const std::vector<int>& values() const { return val_; }
  const std::vector<unsigned>& domains() const { return dom_; }

 private:
  bool rec() {
    if (!budget_.tick(res_.node_count)) {
      aborted_ = true;
      return false;
    }
    int pick = -1;
    for (int c : big_) {
      for (int v : inst_.constraints[c].vars)
        if (val_[v] < 0) { pick = c; break; }
      if (pick >= 0) break;
    }
    if (pick < 0) {
      for (int v = 0; v < inst_.num_vars; ++v)
        if (val_[v] < 0 && dom_[v] == 0) return false;
      return true;
    }
    const auto& con = inst_.constraints[pick];
    for (const auto& t : inst_.rels[con.rel].tuples()) {
      std::vector<int> saved = val_;
      bool ok = true;
      for (std::size_t i = 0; i < con.vars.size() && ok; ++i) {
        int v = con.vars[i];
        if (val_[v] >= 0 && val_[v] != t[i]) ok = false;
        else if (!(dom_[v] >> t[i] & 1u)) ok = false;
        else val_[v] = t[i];
      }
      if (ok) ok = fully_assigned_ok();
      if (ok && rec()) return true;
      val_ = std::move(saved);
      if (aborted_) return false;
    }
    return false;
  }

  bool fully_assigned_ok() const {
    Tuple t;
    for (int c : big_) {
      const auto& con = inst_.constraints[c];
      t.resize(con.vars.size());
      bool full = true;
      for (std::size_t i = 0; i < con.vars.size() && full; ++i) {
        if (val_[con.vars[i]] < 0) full = false;
        else t[i] = static_cast<Value>(val_[con.vars[i]]);
      }
      if (full && !inst_.rels[con.rel].contains(t)) return false;
    }
    return true;
  }

  const Instance& inst_;
  Budget& budget_;
  SolveResult& res_;
  std::vector<int> val_;
  std::vector<unsigned> dom_;
  std::vector<int> big_;
  bool nullary_false_ = false;
  bool aborted_ = false;
};

}  // namespace

SolveResult branch_generic(const Instance& inst, const SolveOptions& opts) {
  inst.validate();
  for (const auto& c : inst.constraints) {
    const auto& r = inst.rels[c.rel];
    if (r.arity() >= 2 && r.size() != 3)
      throw std::invalid_argument("branch_generic: relation '" + inst.rel_names[c.rel] +
                                  "' is used non-unarily but does not have three tuples");
  }
  SolveResult res;
  Budget budget(opts);
  GenericBrancher gb(inst, budget, res);
  bool found = gb.run();
  if (gb.aborted()) {
    res.status = Status::unknown;
    res.warnings.push_back("budget exceeded");
  } else if (found) {
    res.status = Status::sat;
    Assignment a(inst.num_vars);
    for (int v = 0; v < inst.num_vars; ++v) {
      int x = gb.values()[v];
      if (x < 0) {
        unsigned d = gb.domains()[v];
        x = 0;
        while (!(d >> x & 1u)) ++x;
      }
      a[v] = static_cast<Value>(x);
    }
    res.model = a;
  } else {
    res.status = Status::unsat;
  }
  res.time_ms = budget.elapsed();
  verify_model(inst, res);
  return res;
}

namespace {

// Search state for branch_rd: union-find over the original variables plus k
// anchors (anchor d is node num_vars + d), and per-constraint resolved flags.
struct RdState {
  std::vector<int> parent;
  std::vector<char> resolved;

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

class RdBrancher {
 public:
  RdBrancher(const Instance& inst, const Relation& rd, const RdOptions& opts, Budget& budget, SolveResult& res)
      : inst_(inst), rd_(rd), opts_(opts), budget_(budget), res_(res), k_(inst.k), n_(inst.num_vars) {
    dom_ = unary_domains(inst, nullary_false_);
    for (std::size_t c = 0; c < inst.constraints.size(); ++c)
      if (inst.rels[inst.constraints[c].rel].arity() >= 2) big_.push_back(static_cast<int>(c));
    three_choice_.resize(rd.arity());
    for (int p = 0; p < rd.arity(); ++p) three_choice_[p] = choice_class(rd, p) == 3;
  }

  bool run(RdState& st) {
    if (nullary_false_) return false;
    return rec(st);
  }
  bool aborted() const { return aborted_; }
  const RdState& solution() const { return sol_; }
  const std::vector<unsigned>& domains() const { return dom_; }

  // Anchor values present in each class, as bitmasks indexed by representative.
  std::vector<unsigned> anchor_masks(RdState& st) const {
    std::vector<unsigned> m(n_ + k_, 0);
    for (int d = 0; d < k_; ++d) m[st.find(n_ + d)] |= 1u << d;
    return m;
  }

 private:
  bool leaf_ok(RdState& st) {
    auto am = anchor_masks(st);
    std::vector<unsigned> cls(n_ + k_, (1u << k_) - 1);
    for (int v = 0; v < n_; ++v) cls[st.find(v)] &= dom_[v];
    for (int x = 0; x < n_ + k_; ++x) {
      if (st.find(x) != x) continue;
      if (popcount(am[x]) > 1) return false;
      if (am[x]) {
        if (!(cls[x] & am[x])) return false;
      } else if (cls[x] == 0) {
        return false;
      }
    }
    return true;
  }

  // Row r is consistent with the identifications made so far.
  bool row_consistent(RdState& st, const Constraint& con, int r, const std::vector<unsigned>& am) {
    std::vector<int> seen(n_ + k_, -1);
    const Tuple& t = rd_[r];
    for (std::size_t q = 0; q < con.vars.size(); ++q) {
      int c = st.find(con.vars[q]);
      if (am[c] && !(am[c] >> t[q] & 1u)) return false;
      if (seen[c] >= 0 && seen[c] != t[q]) return false;
      seen[c] = t[q];
    }
    for (std::size_t q = 0; q < con.vars.size(); ++q) {
      int v = con.vars[q];
      if (!(dom_[v] >> t[q] & 1u)) return false;
    }
    return true;
  }

  void apply_row(RdState& st, int ci, int r) {
    const auto& con = inst_.constraints[ci];
    for (std::size_t q = 0; q < con.vars.size(); ++q) st.unite(con.vars[q], n_ + rd_[r][q]);
    st.resolved[ci] = 1;
  }

  bool rec(RdState& st) {
    if (!budget_.tick(res_.node_count)) {
      aborted_ = true;
      return false;
    }
    const int limit = k_ * k_ + 1;
    for (;;) {
      int pick = -1;
      for (int c : big_)
        if (!st.resolved[c]) { pick = c; break; }
      if (pick < 0) {
        if (leaf_ok(st)) {
          sol_ = st;
          return true;
        }
        return false;
      }
      const auto& con = inst_.constraints[pick];
      std::vector<int> occ(n_ + k_, 0);
      for (int v : con.vars)
        if (++occ[st.find(v)] >= limit) return false;
      auto am = anchor_masks(st);
      int forced_row = -1;
      for (std::size_t q = 0; q < con.vars.size() && forced_row < 0; ++q) {
        if (!three_choice_[q]) continue;
        unsigned m = am[st.find(con.vars[q])];
        if (!m) continue;
        int d = 0;
        while (!(m >> d & 1u)) ++d;
        for (int r = 0; r < 3; ++r)
          if (rd_[r][q] == d) forced_row = r;
      }
      if (forced_row >= 0) {
        if (opts_.eager_conflicts && !row_consistent(st, con, forced_row, am)) return false;
        apply_row(st, pick, forced_row);
        continue;
      }
      for (int r = 0; r < 3; ++r) {
        if (opts_.eager_conflicts && !row_consistent(st, con, r, am)) continue;
        RdState child = st;
        apply_row(child, pick, r);
        if (rec(child)) return true;
        if (aborted_) return false;
      }
      return false;
    }
  }

  const Instance& inst_;
  const Relation& rd_;
  RdOptions opts_;
  Budget& budget_;
  SolveResult& res_;
  int k_, n_;
  std::vector<unsigned> dom_;
  std::vector<int> big_;
  std::vector<char> three_choice_;
  bool nullary_false_ = false;
  bool aborted_ = false;
  RdState sol_;
};

}  // namespace

SolveResult branch_rd(const Instance& inst, const RdOptions& opts) {
  inst.validate();
  const int k = inst.k;
  if (k < 2) throw std::invalid_argument("branch_rd needs k >= 2");
  Relation rd = make_rd(k);
  for (const auto& c : inst.constraints) {
    const auto& r = inst.rels[c.rel];
    if (r.arity() >= 2 && r != rd)
      throw std::invalid_argument("branch_rd: relation '" + inst.rel_names[c.rel] + "' is not make_rd(k)");
    if (r.arity() == 0 && !r.empty())
      continue;
  }
  SolveResult res;
  if (k < 5)
    res.warnings.push_back("k < 5: the per-branch variable removal bound is vacuous; progress comes from fixing the branched constraint");
  Budget budget(opts.solve);
  RdBrancher br(inst, rd, opts, budget, res);
  RdState st;
  st.parent.resize(inst.num_vars + k);
  for (std::size_t i = 0; i < st.parent.size(); ++i) st.parent[i] = static_cast<int>(i);
  st.resolved.assign(inst.constraints.size(), 0);
  bool found = br.run(st);
  if (br.aborted()) {
    res.status = Status::unknown;
    res.warnings.push_back("budget exceeded");
  } else if (found) {
    res.status = Status::sat;
    RdState sol = br.solution();
    auto am = br.anchor_masks(sol);
    std::vector<unsigned> cls(inst.num_vars + k, (1u << k) - 1);
    for (int v = 0; v < inst.num_vars; ++v) cls[sol.find(v)] &= br.domains()[v];
    Assignment a(inst.num_vars);
    for (int v = 0; v < inst.num_vars; ++v) {
      int c = sol.find(v);
      unsigned m = am[c] ? am[c] : cls[c];
      int x = 0;
      while (!(m >> x & 1u)) ++x;
      a[v] = static_cast<Value>(x);
    }
    res.model = a;
  } else {
    res.status = Status::unsat;
  }
  res.time_ms = budget.elapsed();
  verify_model(inst, res);
  return res;
}

}  // namespace gcsp
