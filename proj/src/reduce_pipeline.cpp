#include <algorithm>

#include "galois_csp/reductions.hpp"
#include "reduce_common.hpp"

namespace gcsp {

Reduced lv_reduce_3sat(const Instance& inst, const Language& gamma, const Interpretation& interp) {
  inst.validate();
  const Relation rnn = make_rnn();
  if (inst.k != 2) throw std::invalid_argument("lv_reduce_3sat: instance must be Boolean");
  std::vector<int> deg(inst.num_vars, 0);
  for (const auto& c : inst.constraints) {
    if (inst.rels[c.rel] != rnn) throw std::invalid_argument("lv_reduce_3sat: every constraint must use the 6-ary relation");
    std::vector<int> vs = c.vars;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (int v : vs)
      if (++deg[v] > 2) throw std::invalid_argument("lv_reduce_3sat: degree-2 precondition violated");
  }
  if (interp.e_size != 2) throw std::invalid_argument("lv_reduce_3sat: interpretation must target {0,1}");
  interp.validate(gamma, {{"rnn", rnn}});
  const PPFormula& phi1 = interp.preimage_defs.at("rnn");
  const PPFormula& phi2 = interp.def_F;
  const int d = interp.d;

  Instance out;
  out.k = gamma.k;
  UnionFind uf;
  auto fresh = [&] {
    uf.add();
    return out.add_var();
  };
  detail::AtomEmitter em{out, gamma, uf};
  std::vector<std::vector<int>> block(inst.num_vars);
  for (int v = 0; v < inst.num_vars; ++v) {
    for (int i = 0; i < d; ++i) block[v].push_back(fresh());
  }
  for (int v = 0; v < inst.num_vars; ++v) {
    std::vector<int> m = block[v];
    for (int b = 0; b < phi2.num_bound; ++b) m.push_back(fresh());
    em.emit(phi2, m);
  }
  for (const auto& c : inst.constraints) {
    std::vector<int> m;
    for (int v : c.vars) m.insert(m.end(), block[v].begin(), block[v].end());
    for (int b = 0; b < phi1.num_bound; ++b) m.push_back(fresh());
    em.emit(phi1, m);
  }
  detail::finish(out, uf, em.unsat, gamma.max_arity());
  Reduced res{out, detail::make_report("lv_reduce_3sat", inst, out)};
  auto& rep = res.report;
  rep.d = d;
  rep.k1 = phi1.num_bound;
  rep.k2 = phi2.num_bound;
  rep.L = std::max(max_var_degree(phi1), max_var_degree(phi2));
  const long n = inst.num_vars, m = static_cast<long>(inst.constraints.size());
  rep.notes.push_back("bound |V|d + 2|V|k1 + k2 = " + std::to_string(n * d + 2 * n * rep.k1 + rep.k2));
  rep.notes.push_back("exact count |V|(d + k2) + |C|k1 = " + std::to_string(n * (d + rep.k2) + m * rep.k1));
  auto c1 = classify(phi1), c2 = classify(phi2);
  if (c1.equality_free && c2.equality_free) rep.notes.push_back("efpp definitions: degree bound 3L = " + std::to_string(3 * rep.L));
  return res;
}

Reduced reduce_easiest(const Instance& inst, const Language& gamma, const EasiestOptions& opts) {
  inst.validate();
  const int k = gamma.k;
  if (inst.k != k) throw std::invalid_argument("reduce_easiest: domain mismatch");
  std::vector<std::string> notes;
  PPFormula psi;
  if (opts.extension) {
    psi = *opts.extension;
    if (psi.num_bound > 0) {
      psi = qfpp_extension(psi, gamma);
      notes.push_back("bound variables eliminated by qfpp_extension");
    }
  } else {
    bool found = false;
    for (const auto& [name, rel] : gamma.rels)
      if (rel.size() == 3 && detect_rb_extension(rel)) {
        psi = atom_formula(name, rel.arity());
        notes.push_back("discovered R^B-extension '" + name + "'");
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument(
          "reduce_easiest: no R^B-extension available (discovery by detect_rb_extension over the language failed)");
  }
  const Relation r = evaluate(psi, gamma);
  if (!detect_rb_extension(r)) throw std::invalid_argument("reduce_easiest: supplied formula does not define an R^B-extension");
  const Relation rs = saturate(r).relation;

  CvOptions co;
  co.out_name = rs == r ? "ext" : "ext_sat";
  Reduced lifted = lift_rd(inst, rs, opts.order, co);
  Instance w = lifted.instance;
  if (!is_canonical_unsat(w) && rs != r) {
    Language l1 = all_unary(k);
    l1.add("ext", r);
    PPFormula def = canonical_qfpp(rs, l1);
    if (evaluate(def, l1) != rs) throw InternalError("reduce_easiest: saturation is not qfpp-definable from the extension");
    w = qfpp_inline(w, {{"ext_sat", def}}, l1).instance;
    notes.push_back("saturation inlined through its canonical qfpp definition");
  }
  if (!is_canonical_unsat(w)) w = qfpp_inline(w, {{"ext", psi}}, gamma).instance;
  Reduced res{w, detail::make_report("reduce_easiest", inst, w)};
  res.report.notes = notes;
  for (const auto& n : lifted.report.notes) res.report.notes.push_back(n);
  res.report.notes.push_back("target includes constant relations of the language");
  return res;
}

}  // namespace gcsp
