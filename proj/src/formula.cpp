#include "galois_csp/formula.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace gcsp {

FormulaClass classify(const PPFormula& phi) {
  FormulaClass c;
  c.quantifier_free = phi.num_bound == 0;
  for (const auto& a : phi.atoms)
    if (a.rel == "eq") c.equality_free = false;
  return c;
}

namespace {

struct ResolvedAtom {
  const Relation* rel;
  std::vector<int> args;
};

class Evaluator {
 public:
  Evaluator(const PPFormula& phi, const Language& gamma)
      : nf_(phi.num_free), nv_(phi.num_vars()), k_(gamma.k), eq_(eq_relation(gamma.k)),
        none_(empty_relation(gamma.k, 0)), val_(nv_, -1), watch_(nv_) {
    for (const auto& a : phi.atoms) {
      const Relation* r;
      if (a.rel == "eq") r = &eq_;
      else if (a.rel == "false") r = &none_;
      else r = &gamma.at(a.rel);
      if (static_cast<int>(a.args.size()) != r->arity())
        throw std::invalid_argument("atom '" + a.rel + "' has wrong argument count");
      for (int v : a.args)
        if (v < 0 || v >= nv_) throw std::invalid_argument("atom argument out of range");
      atoms_.push_back({r, a.args});
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      std::set<int> seen(atoms_[i].args.begin(), atoms_[i].args.end());
      for (int v : seen) watch_[v].push_back(static_cast<int>(i));
    }
  }

  Relation run() {
    for (const auto& a : atoms_)
      if (a.args.empty() && a.rel->empty()) return Relation(k_, nf_, {});
    std::vector<Tuple> out;
    Tuple cur(nf_);
    free_search(0, cur, out);
    return Relation(k_, nf_, std::move(out));
  }

 private:
  bool consistent(const ResolvedAtom& a) const {
    for (const auto& t : a.rel->tuples()) {
      bool ok = true;
      for (std::size_t i = 0; i < a.args.size() && ok; ++i) {
        int v = val_[a.args[i]];
        if (v >= 0 && v != t[i]) ok = false;
      }
      if (ok) return true;
    }
    return false;
  }

  bool assign_ok(int v) const {
    for (int ai : watch_[v])
      if (!consistent(atoms_[ai])) return false;
    return true;
  }

  bool bound_search(int v) {
    if (v == nv_) return true;
    for (int d = 0; d < k_; ++d) {
      val_[v] = d;
      if (assign_ok(v) && bound_search(v + 1)) {
        val_[v] = -1;
        return true;
      }
    }
    val_[v] = -1;
    return false;
  }

  void free_search(int v, Tuple& cur, std::vector<Tuple>& out) {
    if (v == nf_) {
      if (bound_search(nf_)) out.push_back(cur);
      return;
    }
    for (int d = 0; d < k_; ++d) {
      val_[v] = d;
      cur[v] = static_cast<Value>(d);
      if (assign_ok(v)) free_search(v + 1, cur, out);
    }
    val_[v] = -1;
  }

  int nf_, nv_, k_;
  Relation eq_, none_;
  std::vector<ResolvedAtom> atoms_;
  std::vector<int> val_;
  std::vector<std::vector<int>> watch_;
};

}  // namespace

Relation evaluate(const PPFormula& phi, const Language& gamma) {
  if (phi.num_free < 0 || phi.num_bound < 0) throw std::invalid_argument("negative variable count");
  return Evaluator(phi, gamma).run();
}

PPFormula canonical_qfpp(const Relation& r, const Language& gamma) {
  if (!gamma.rels.empty() && gamma.k != r.domain())
    throw std::invalid_argument("relation and language domains differ");
  PPFormula phi;
  phi.name = "canonical";
  phi.num_free = r.arity();
  auto cols = r.columns();
  std::vector<int> reps;
  for (int p = 0; p < r.arity(); ++p) {
    int rep = -1;
    for (int q : reps)
      if (cols[q] == cols[p]) { rep = q; break; }
    if (rep < 0) reps.push_back(p);
    else phi.atoms.push_back({"eq", {rep, p}});
  }
  if (r.empty()) phi.atoms.push_back({"false", {}});
  for (const auto& [name, g] : gamma.rels) {
    const auto& gt = g.tuples();
    int m = g.arity();
    // prefix test: is u a prefix of some tuple of g?
    auto has_prefix = [&](const Tuple& u) {
      auto it = std::lower_bound(gt.begin(), gt.end(), u);
      return it != gt.end() && std::equal(u.begin(), u.end(), it->begin());
    };
    std::vector<int> pos;
    std::vector<Tuple> partial(r.size());
    auto rec = [&](auto&& self, int depth) -> void {
      if (depth == m) {
        phi.atoms.push_back({name, pos});
        return;
      }
      for (int p : reps) {
        bool ok = true;
        for (std::size_t j = 0; j < r.size() && ok; ++j) {
          partial[j].push_back(r[j][p]);
          ok = has_prefix(partial[j]);
        }
        if (ok) {
          pos.push_back(p);
          self(self, depth + 1);
          pos.pop_back();
        }
        for (std::size_t j = 0; j < r.size(); ++j)
          if (static_cast<int>(partial[j].size()) > depth) partial[j].pop_back();
      }
    };
    if (m == 0) {
      if (!g.empty() || r.empty()) phi.atoms.push_back({name, {}});
      continue;
    }
    if (reps.empty()) continue;
    if (r.empty()) {
      // every atom holds vacuously; one representative suffices
      phi.atoms.push_back({name, std::vector<int>(m, reps[0])});
      continue;
    }
    rec(rec, 0);
  }
  return phi;
}

PPFormula atom_formula(const std::string& rel, int arity) {
  PPFormula phi;
  phi.name = rel;
  phi.num_free = arity;
  Atom a{rel, {}};
  for (int i = 0; i < arity; ++i) a.args.push_back(i);
  phi.atoms.push_back(a);
  return phi;
}

PPFormula promote_bound(const PPFormula& phi, int bound_var) {
  if (bound_var < phi.num_free || bound_var >= phi.num_vars())
    throw std::invalid_argument("promote_bound: not a bound variable");
  std::vector<int> remap(phi.num_vars());
  for (int v = 0; v < phi.num_free; ++v) remap[v] = v;
  remap[bound_var] = phi.num_free;
  int next = phi.num_free + 1;
  for (int v = phi.num_free; v < phi.num_vars(); ++v)
    if (v != bound_var) remap[v] = next++;
  PPFormula out = phi;
  out.num_free += 1;
  out.num_bound -= 1;
  for (auto& a : out.atoms)
    for (int& v : a.args) v = remap[v];
  return out;
}

void conjoin_instance(PPFormula& host, const PPFormula& sub, const std::vector<int>& free_map) {
  if (static_cast<int>(free_map.size()) != sub.num_free)
    throw std::invalid_argument("conjoin_instance: free map size mismatch");
  std::vector<int> remap(sub.num_vars());
  for (int v = 0; v < sub.num_free; ++v) remap[v] = free_map[v];
  for (int v = sub.num_free; v < sub.num_vars(); ++v) remap[v] = host.add_bound();
  for (const auto& a : sub.atoms) {
    Atom b{a.rel, {}};
    for (int v : a.args) b.args.push_back(remap[v]);
    host.atoms.push_back(std::move(b));
  }
}

int max_var_degree(const PPFormula& phi) {
  std::vector<int> deg(phi.num_vars(), 0);
  for (const auto& a : phi.atoms)
    for (int v : a.args) ++deg[v];
  int m = 0;
  for (int d : deg) m = std::max(m, d);
  return m;
}

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eof() {
    skip();
    return i_ >= s_.size();
  }
  bool peek(const std::string& tok) {
    skip();
    return s_.compare(i_, tok.size(), tok) == 0;
  }
  void expect(const std::string& tok) {
    if (!peek(tok)) fail("expected '" + tok + "'");
    i_ += tok.size();
  }
  bool accept(const std::string& tok) {
    if (!peek(tok)) return false;
    i_ += tok.size();
    return true;
  }
  std::string ident() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\''))
      ++j;
    if (j == i_) fail("expected identifier");
    std::string r = s_.substr(i_, j - i_);
    i_ = j;
    return r;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("formula text: " + what + " at offset " + std::to_string(i_));
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

std::vector<std::string> ident_list(Lexer& lx, const std::string& close) {
  std::vector<std::string> out;
  if (lx.accept(close)) return out;
  do out.push_back(lx.ident());
  while (lx.accept(","));
  lx.expect(close);
  return out;
}

}  // namespace

PPFormula parse_formula(const std::string& text) {
  Lexer lx(text);
  lx.expect("def");
  PPFormula phi;
  phi.name = lx.ident();
  lx.expect("(");
  auto free = ident_list(lx, ")");
  lx.expect(":=");
  std::vector<std::string> bound;
  if (lx.accept("exists")) {
    do bound.push_back(lx.ident());
    while (lx.accept(","));
    lx.expect(".");
  }
  std::map<std::string, int> index;
  for (const auto& v : free)
    if (!index.emplace(v, static_cast<int>(index.size())).second) lx.fail("duplicate variable " + v);
  for (const auto& v : bound)
    if (!index.emplace(v, static_cast<int>(index.size())).second) lx.fail("duplicate variable " + v);
  phi.num_free = static_cast<int>(free.size());
  phi.num_bound = static_cast<int>(bound.size());
  if (lx.accept("true")) {
    if (!lx.eof()) lx.fail("trailing text");
    return phi;
  }
  do {
    Atom a{lx.ident(), {}};
    lx.expect("(");
    for (const auto& v : ident_list(lx, ")")) {
      auto it = index.find(v);
      if (it == index.end()) lx.fail("undeclared variable " + v);
      a.args.push_back(it->second);
    }
    phi.atoms.push_back(std::move(a));
  } while (lx.accept("&"));
  if (!lx.eof()) lx.fail("trailing text");
  return phi;
}

std::vector<PPFormula> parse_formulas(std::istream& is) {
  std::vector<PPFormula> out;
  std::string line, acc;
  auto flush = [&] {
    if (!acc.empty()) out.push_back(parse_formula(acc));
    acc.clear();
  };
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 4, "def ") == 0) flush();
    acc += line + " ";
  }
  flush();
  return out;
}

std::string format_formula(const PPFormula& phi) {
  auto var = [&](int v) {
    return v < phi.num_free ? "x" + std::to_string(v + 1) : "y" + std::to_string(v - phi.num_free + 1);
  };
  std::ostringstream os;
  os << "def " << phi.name << "(";
  for (int v = 0; v < phi.num_free; ++v) os << (v ? "," : "") << var(v);
  os << ") := ";
  if (phi.num_bound > 0) {
    os << "exists ";
    for (int v = phi.num_free; v < phi.num_vars(); ++v) os << (v > phi.num_free ? "," : "") << var(v);
    os << " . ";
  }
  if (phi.atoms.empty()) os << "true";
  for (std::size_t i = 0; i < phi.atoms.size(); ++i) {
    os << (i ? " & " : "") << phi.atoms[i].rel << "(";
    for (std::size_t j = 0; j < phi.atoms[i].args.size(); ++j)
      os << (j ? "," : "") << var(phi.atoms[i].args[j]);
    os << ")";
  }
  return os.str();
}

}  // namespace gcsp
