#include "galois_csp/instance.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gcsp {

int Instance::find_relation(const std::string& name) const {
  for (std::size_t i = 0; i < rel_names.size(); ++i)
    if (rel_names[i] == name) return static_cast<int>(i);
  return -1;
}

int Instance::add_relation(const std::string& name, const Relation& r) {
  int i = find_relation(name);
  if (i >= 0) {
    if (rels[i] != r) throw std::invalid_argument("relation '" + name + "' redefined");
    return i;
  }
  if (r.domain() != k) throw std::invalid_argument("relation '" + name + "' has wrong domain");
  rel_names.push_back(name);
  rels.push_back(r);
  return static_cast<int>(rels.size()) - 1;
}

void Instance::add_constraint(int rel, std::vector<int> vars) {
  constraints.push_back({rel, std::move(vars)});
}

void Instance::validate() const {
  if (k < 1) throw std::invalid_argument("instance domain must be >= 1");
  if (rel_names.size() != rels.size()) throw std::invalid_argument("relation table mismatch");
  for (const auto& r : rels)
    if (r.domain() != k) throw std::invalid_argument("relation domain differs from instance");
  for (const auto& c : constraints) {
    if (c.rel < 0 || c.rel >= static_cast<int>(rels.size()))
      throw std::invalid_argument("constraint names an unknown relation");
    if (static_cast<int>(c.vars.size()) != rels[c.rel].arity())
      throw std::invalid_argument("constraint arity mismatch for '" + rel_names[c.rel] + "'");
    for (int v : c.vars)
      if (v < 0 || v >= num_vars) throw std::invalid_argument("constraint variable out of range");
  }
}

bool Instance::satisfied_by(const Assignment& a) const {
  if (static_cast<int>(a.size()) != num_vars) return false;
  Tuple t;
  for (const auto& c : constraints) {
    t.resize(c.vars.size());
    for (std::size_t i = 0; i < c.vars.size(); ++i) t[i] = a[c.vars[i]];
    if (!rels[c.rel].contains(t)) return false;
  }
  return true;
}

std::vector<int> Instance::degrees() const {
  std::vector<int> d(num_vars, 0);
  for (const auto& c : constraints)
    for (int v : c.vars) ++d[v];
  return d;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.k == b.k && a.num_vars == b.num_vars && a.rel_names == b.rel_names &&
         a.rels == b.rels && a.constraints == b.constraints;
}

Instance canonical_unsat(int k, int arity) {
  Instance inst;
  inst.k = k;
  inst.num_vars = 1;
  int r = inst.add_relation("empty", empty_relation(k, arity));
  inst.add_constraint(r, std::vector<int>(arity, 0));
  return inst;
}

bool is_canonical_unsat(const Instance& inst) {
  return inst.constraints.size() == 1 && inst.rels[inst.constraints[0].rel].empty();
}

UnionFind::UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
}

int UnionFind::add() {
  parent_.push_back(static_cast<int>(parent_.size()));
  return static_cast<int>(parent_.size()) - 1;
}

void apply_identification(Instance& inst, UnionFind& uf) {
  for (auto& c : inst.constraints)
    for (int& v : c.vars) v = uf.find(v);
}

void write_instance(std::ostream& os, const Instance& inst, bool inline_relations) {
  os << "domain " << inst.k << "\n";
  if (inline_relations)
    for (std::size_t i = 0; i < inst.rels.size(); ++i) write_relation(os, inst.rel_names[i], inst.rels[i]);
  os << "vars " << inst.num_vars << "\n";
  for (const auto& c : inst.constraints) {
    os << inst.rel_names[c.rel];
    for (int v : c.vars) os << " " << v + 1;
    os << "\n";
  }
}

Instance read_instance(std::istream& is, const std::string& base_dir) {
  Instance inst;
  std::string line;
  bool have_domain = false, have_vars = false;
  std::vector<std::string> pending;  // rel blocks are parsed from the raw stream
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string w;
    if (!(ls >> w) || w[0] == '#') continue;
    if (w == "domain") {
      ls >> inst.k;
      if (!ls || inst.k < 1) throw std::invalid_argument("instance text: bad domain line");
      have_domain = true;
    } else if (w == "rel") {
      if (!have_domain) throw std::invalid_argument("instance text: rel before domain");
      std::string name, kw;
      int k = 0, n = 0, m = 0;
      ls >> name >> kw >> k >> kw >> n >> kw >> m;
      std::ostringstream block;
      block << line << "\n";
      for (int r = 0; r < m; ++r) {
        if (!std::getline(is, line)) throw std::invalid_argument("instance text: truncated rel block");
        block << line << "\n";
      }
      std::istringstream bs(block.str());
      auto [nm, rel] = read_relation(bs);
      inst.add_relation(nm, rel);
    } else if (w == "relfile") {
      std::string path;
      ls >> path;
      std::filesystem::path p(path);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      std::ifstream f(p);
      if (!f) throw std::invalid_argument("instance text: cannot open relfile " + p.string());
      Language lang = read_language(f);
      for (const auto& [nm, rel] : lang.rels) inst.add_relation(nm, rel);
    } else if (w == "vars") {
      ls >> inst.num_vars;
      if (!ls || inst.num_vars < 0) throw std::invalid_argument("instance text: bad vars line");
      have_vars = true;
    } else {
      if (!have_vars) throw std::invalid_argument("instance text: constraint before vars line");
      int r = inst.find_relation(w);
      if (r < 0) throw std::invalid_argument("instance text: unknown relation '" + w + "'");
      std::vector<int> vs;
      int v;
      while (ls >> v) {
        if (v < 1 || v > inst.num_vars) throw std::invalid_argument("instance text: variable out of range");
        vs.push_back(v - 1);
      }
      if (static_cast<int>(vs.size()) != inst.rels[r].arity())
        throw std::invalid_argument("instance text: arity mismatch for '" + w + "'");
      inst.add_constraint(r, std::move(vs));
    }
  }
  if (!have_domain) throw std::invalid_argument("instance text: missing domain line");
  inst.validate();
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open instance file " + path);
  auto dir = std::filesystem::path(path).parent_path().string();
  return read_instance(f, dir.empty() ? "." : dir);
}

std::string to_text(const Instance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

Instance from_text(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

}  // namespace gcsp
