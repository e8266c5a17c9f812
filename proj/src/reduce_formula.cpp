#include <algorithm>
#include <array>
#include <numeric>

#include "galois_csp/reductions.hpp"
#include "reduce_common.hpp"

namespace gcsp {

namespace detail {

void AtomEmitter::emit(const PPFormula& phi, const std::vector<int>& var_map) {
  for (const auto& a : phi.atoms) {
    if (a.rel == "eq") {
      uf.unite(var_map[a.args[0]], var_map[a.args[1]]);
      continue;
    }
    if (a.rel == "false") {
      unsat = true;
      continue;
    }
    if (!gamma.has(a.rel)) throw std::invalid_argument("atom names relation '" + a.rel + "' outside the language");
    int r = out.add_relation(a.rel, gamma.at(a.rel));
    std::vector<int> vs;
    for (int v : a.args) vs.push_back(var_map[v]);
    out.add_constraint(r, std::move(vs));
  }
}

void finish(Instance& out, UnionFind& uf, bool unsat, int unsat_arity) {
  if (unsat) {
    out = canonical_unsat(out.k, std::max(1, unsat_arity));
    return;
  }
  apply_identification(out, uf);
}

ReductionReport make_report(const std::string& step, const Instance& in, const Instance& out) {
  ReductionReport r;
  r.step = step;
  r.vars_in = in.num_vars;
  r.vars_out = out.num_vars;
  r.constraints_in = static_cast<int>(in.constraints.size());
  r.constraints_out = static_cast<int>(out.constraints.size());
  r.cv_constant = static_cast<long>(r.vars_out) - r.vars_in;
  if (is_canonical_unsat(out)) r.notes.push_back("unsat detected, canonical unsat emitted");
  return r;
}

int append_free(PPFormula& phi) {
  for (auto& a : phi.atoms)
    for (int& v : a.args)
      if (v >= phi.num_free) ++v;
  return phi.num_free++;
}

}  // namespace detail

Relation preimage(const Interpretation& interp, const Relation& target) {
  const int n = target.arity(), d = interp.d;
  const std::size_t m = interp.F.size();
  std::vector<Tuple> out;
  if (m == 0) return Relation(interp.F.domain(), n * d, {});
  std::vector<std::size_t> idx(n, 0);
  Tuple img(n);
  for (;;) {
    for (int j = 0; j < n; ++j) img[j] = interp.f[idx[j]];
    if (target.contains(img)) {
      Tuple t;
      for (int j = 0; j < n; ++j) t.insert(t.end(), interp.F[idx[j]].begin(), interp.F[idx[j]].end());
      out.push_back(std::move(t));
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] == m) idx[j--] = 0;
    if (j < 0) break;
  }
  return Relation(interp.F.domain(), n * d, std::move(out));
}

void Interpretation::validate(const Language& gamma, const std::map<std::string, Relation>& targets) const {
  if (d < 1 || F.arity() != d) throw std::invalid_argument("interpretation: F must have arity d");
  if (f.size() != F.size()) throw std::invalid_argument("interpretation: f must be defined on every tuple of F");
  std::vector<char> hit(e_size, 0);
  for (Value v : f) {
    if (v >= e_size) throw std::invalid_argument("interpretation: f value outside the target domain");
    hit[v] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end())
    throw std::invalid_argument("interpretation: f is not surjective");
  if (def_F.num_free != d || evaluate(def_F, gamma) != F)
    throw std::invalid_argument("interpretation: definition of F does not evaluate to F");
  for (const auto& [name, rel] : targets) {
    auto it = preimage_defs.find(name);
    if (it == preimage_defs.end()) throw std::invalid_argument("interpretation: no definition for '" + name + "'");
    if (it->second.num_free != d * rel.arity() || evaluate(it->second, gamma) != preimage(*this, rel))
      throw std::invalid_argument("interpretation: definition of '" + name + "' does not evaluate to its preimage");
  }
}

Reduced qfpp_inline(const Instance& inst, const std::map<std::string, PPFormula>& defs, const Language& gamma) {
  inst.validate();
  for (const auto& [name, phi] : defs)
    if (phi.num_bound > 0) throw std::invalid_argument("qfpp_inline: definition of '" + name + "' has bound variables");
  Instance out;
  out.k = inst.k;
  out.num_vars = inst.num_vars;
  UnionFind uf(inst.num_vars);
  detail::AtomEmitter em{out, gamma, uf};
  std::vector<char> checked(inst.rels.size(), 0);
  for (const auto& c : inst.constraints) {
    const std::string& name = inst.rel_names[c.rel];
    const Relation& rel = inst.rels[c.rel];
    auto it = defs.find(name);
    if (it == defs.end()) {
      if (!gamma.has(name) || gamma.at(name) != rel)
        throw std::invalid_argument("qfpp_inline: no definition for relation '" + name + "'");
      out.add_constraint(out.add_relation(name, rel), c.vars);
      continue;
    }
    const PPFormula& phi = it->second;
    if (!checked[c.rel]) {
      if (phi.num_free != rel.arity() || evaluate(phi, gamma) != rel)
        throw std::invalid_argument("qfpp_inline: definition of '" + name + "' does not evaluate to it");
      checked[c.rel] = 1;
    }
    em.emit(phi, c.vars);
  }
  detail::finish(out, uf, em.unsat, gamma.max_arity());
  Reduced res{out, detail::make_report("qfpp_inline", inst, out)};
  return res;
}

TwoTupleRefinement refine_two_tuple(const Relation& F, const std::vector<Value>& f) {
  if (f.size() != F.size()) throw std::invalid_argument("refine_two_tuple: table size differs from |F|");
  int s = -1, t = -1;
  for (std::size_t r = 0; r < f.size(); ++r) {
    if (f[r] > 1) throw std::invalid_argument("refine_two_tuple: f must map into {0,1}");
    if (f[r] == 0 && s < 0) s = static_cast<int>(r);
    if (f[r] == 1 && t < 0) t = static_cast<int>(r);
  }
  if (s < 0 || t < 0) throw std::invalid_argument("refine_two_tuple: f is not surjective onto {0,1}");
  TwoTupleRefinement res;
  const int d = F.arity();
  for (;;) {
    std::vector<int> g;
    for (std::size_t r = 0; r < F.size(); ++r) {
      bool in = true;
      for (int i = 0; i < d && in; ++i) in = F[r][i] == F[s][i] || F[r][i] == F[t][i];
      if (in) g.push_back(static_cast<int>(r));
    }
    if (g.size() == 2) break;
    int u = -1;
    for (int r : g)
      if (r != s && r != t) { u = r; break; }
    (f[u] == 0 ? s : t) = u;
    ++res.rounds;
  }
  res.lo.resize(d);
  res.hi.resize(d);
  for (int i = 0; i < d; ++i) {
    res.lo[i] = std::min(F[s][i], F[t][i]);
    res.hi[i] = std::max(F[s][i], F[t][i]);
  }
  res.F = Relation(F.domain(), d, {F[s], F[t]});
  for (const auto& tup : res.F.tuples()) res.f.push_back(tup == F[s] ? f[s] : f[t]);
  return res;
}

namespace {

const std::string& require_unary(const Language& gamma, unsigned mask) {
  static thread_local std::string name;
  name = unary_name(mask);
  if (!gamma.has(name)) throw std::invalid_argument("language lacks unary relation '" + name + "'");
  return name;
}

}  // namespace

PPFormula build_rb_from_interpretation(const Language& gamma, const Interpretation& interp) {
  if (interp.e_size != 2) throw std::invalid_argument("build_rb_from_interpretation: target domain must be {0,1}");
  auto it = interp.preimage_defs.find("rb");
  if (it == interp.preimage_defs.end()) throw std::invalid_argument("build_rb_from_interpretation: no definition for 'rb'");
  const int d = interp.d;
  if (it->second.num_free != 8 * d) throw std::invalid_argument("build_rb_from_interpretation: 'rb' must have 8d free variables");
  auto ref = refine_two_tuple(interp.F, interp.f);
  PPFormula psi;
  psi.name = "rb_extension";
  psi.num_free = 8 * d;
  std::vector<int> ident(8 * d);
  std::iota(ident.begin(), ident.end(), 0);
  conjoin_instance(psi, it->second, ident);
  for (int j = 0; j < 8; ++j) {
    std::vector<int> block(d);
    for (int i = 0; i < d; ++i) block[i] = j * d + i;
    conjoin_instance(psi, interp.def_F, block);
    for (int i = 0; i < d; ++i) {
      unsigned mask = (1u << ref.lo[i]) | (1u << ref.hi[i]);
      psi.atoms.push_back({require_unary(gamma, mask), {block[i]}});
    }
  }
  Relation r = evaluate(psi, gamma);
  if (!detect_rb_extension(r)) throw InternalError("build_rb_from_interpretation: result is not an R^B-extension");
  return psi;
}

PPFormula eliminate_quantifiers_pair(const PPFormula& phi, const Language& gamma) {
  Relation cur_rel = evaluate(phi, gamma);
  if (cur_rel.size() != 2) throw std::invalid_argument("eliminate_quantifiers_pair: formula must define exactly two tuples");
  PPFormula cur = phi;
  while (cur.num_bound > 0) {
    const int n = cur.num_free;
    PPFormula next = promote_bound(cur, n);
    Relation ext = evaluate(next, gamma);
    unsigned s[2] = {0, 0};
    for (const auto& u : ext.tuples()) {
      Tuple pre(u.begin(), u.begin() + n);
      s[pre == cur_rel[0] ? 0 : 1] |= 1u << u[n];
    }
    unsigned mask;
    if ((s[0] & s[1]) == 0) mask = (s[0] & -s[0]) | (s[1] & -s[1]);
    else mask = (s[0] & s[1]) & -(s[0] & s[1]);
    next.atoms.push_back({require_unary(gamma, mask), {n}});
    Relation nr = evaluate(next, gamma);
    std::vector<int> head(n);
    std::iota(head.begin(), head.end(), 0);
    if (nr.size() != 2 || project(nr, head) != cur_rel)
      throw InternalError("eliminate_quantifiers_pair: elimination changed the relation");
    cur = std::move(next);
    cur_rel = std::move(nr);
  }
  return cur;
}

namespace {

int find_pattern_column(const Relation& r, int p, int q, int o) {
  for (int i = 0; i < r.arity(); ++i)
    if (r[p][i] == r[q][i] && r[o][i] != r[p][i]) return i;
  return -1;
}

}  // namespace

PPFormula qfpp_extension(const PPFormula& phi, const Language& gamma) {
  Relation cur_rel = evaluate(phi, gamma);
  if (!detect_rb_extension(cur_rel)) throw std::invalid_argument("qfpp_extension: formula does not define an R^B-extension");
  const int k = gamma.k;
  PPFormula cur = phi;
  int step = 0;
  while (cur.num_bound > 0) {
    ++step;
    const int n = cur.num_free;
    PPFormula next = promote_bound(cur, n);
    Relation ext = evaluate(next, gamma);
    std::array<unsigned, 3> s{0, 0, 0};
    for (const auto& u : ext.tuples()) {
      Tuple pre(u.begin(), u.begin() + n);
      for (int r = 0; r < 3; ++r)
        if (pre == cur_rel[r]) s[r] |= 1u << u[n];
    }
    const unsigned all = s[0] | s[1] | s[2];
    if (popcount(all) > 1) {
      unsigned best = 0;
      for (unsigned e = 1; e < (1u << k); ++e) {
        bool ok = true;
        for (int r = 0; r < 3 && ok; ++r) ok = popcount(e & s[r]) == 1;
        if (ok && (best == 0 || popcount(e) < popcount(best))) best = e;
      }
      if (best != 0) {
        next.atoms.push_back({require_unary(gamma, best), {n}});
      } else {
        // Some ordering (p,q,o) has dp in S_p \ S_q and dq in (S_q \ S_p) & S_o.
        std::array<int, 3> ord{0, 1, 2};
        bool found = false;
        int dp = 0, dq = 0;
        do {
          unsigned a = s[ord[0]] & ~s[ord[1]];
          unsigned b = s[ord[1]] & ~s[ord[0]] & s[ord[2]];
          if (a && b) {
            dp = __builtin_ctz(a);
            dq = __builtin_ctz(b);
            found = true;
          }
        } while (!found && std::next_permutation(ord.begin(), ord.end()));
        if (!found) throw InternalError("qfpp_extension: no value split at step " + std::to_string(step));
        const int p = ord[0], q = ord[1], o = ord[2];
        const unsigned e = (1u << dp) | (1u << dq);
        const int fcol = find_pattern_column(cur_rel, p, q, o);
        const int xcol = find_pattern_column(cur_rel, q, o, p);
        if (fcol < 0 || xcol < 0) throw InternalError("qfpp_extension: missing pattern column at step " + std::to_string(step));
        next.atoms.push_back({require_unary(gamma, e), {n}});
        // F(x, y) = exists rest . next & c_v(filter column)
        PPFormula fphi;
        fphi.name = "pair";
        fphi.num_free = 2;
        std::vector<int> fmap(next.num_free);
        for (int i = 0; i < next.num_free; ++i) fmap[i] = i == xcol ? 0 : i == n ? 1 : fphi.add_bound();
        conjoin_instance(fphi, next, fmap);
        fphi.atoms.push_back({require_unary(gamma, 1u << cur_rel[p][fcol]), {fmap[fcol]}});
        Relation fr = evaluate(fphi, gamma);
        Relation want(gamma.k, 2, {{cur_rel[p][xcol], static_cast<Value>(dp)}, {cur_rel[q][xcol], static_cast<Value>(dq)}});
        if (fr != want) throw InternalError("qfpp_extension: auxiliary pair relation is wrong at step " + std::to_string(step));
        PPFormula fq = eliminate_quantifiers_pair(fphi, gamma);
        std::vector<int> zmap(fq.num_free);
        zmap[0] = xcol;
        zmap[1] = n;
        for (int j = 2; j < fq.num_free; ++j) zmap[j] = detail::append_free(next);
        conjoin_instance(next, fq, zmap);
      }
    }
    Relation nr = evaluate(next, gamma);
    std::vector<int> head(n);
    std::iota(head.begin(), head.end(), 0);
    if (nr.size() != 3 || project(nr, head) != cur_rel || !detect_rb_extension(nr))
      throw InternalError("qfpp_extension: step " + std::to_string(step) + " lost the extension pattern");
    cur = std::move(next);
    cur_rel = std::move(nr);
  }
  return cur;
}

}  // namespace gcsp
