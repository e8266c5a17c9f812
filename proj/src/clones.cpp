#include "galois_csp/clones.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace gcsp {

PartialOperation::PartialOperation(int k, int arity) : k_(k), a_(arity) {
  if (k < 1 || arity < 1) throw std::invalid_argument("partial operation needs k >= 1 and arity >= 1");
  double size = 1;
  for (int i = 0; i < arity; ++i) size *= k;
  if (size > (1 << 22)) throw std::invalid_argument("partial operation table too large");
  table_.assign(static_cast<std::size_t>(size), -1);
}

std::size_t PartialOperation::encode(const Tuple& args) const {
  if (static_cast<int>(args.size()) != a_) throw std::invalid_argument("argument count mismatch");
  std::size_t c = 0;
  for (Value v : args) {
    if (v >= k_) throw std::invalid_argument("argument outside domain");
    c = c * k_ + v;
  }
  return c;
}

Tuple PartialOperation::decode(std::size_t code) const {
  Tuple t(a_);
  for (int i = a_ - 1; i >= 0; --i) {
    t[i] = static_cast<Value>(code % k_);
    code /= k_;
  }
  return t;
}

void PartialOperation::set(const Tuple& args, Value v) {
  if (v >= k_) throw std::invalid_argument("value outside domain");
  table_[encode(args)] = v;
}

void PartialOperation::unset(const Tuple& args) { table_[encode(args)] = -1; }

std::optional<Value> PartialOperation::apply(const Tuple& args) const {
  int v = table_[encode(args)];
  if (v < 0) return std::nullopt;
  return static_cast<Value>(v);
}

bool PartialOperation::total() const {
  return std::none_of(table_.begin(), table_.end(), [](int v) { return v < 0; });
}

std::size_t PartialOperation::domain_size() const {
  return static_cast<std::size_t>(std::count_if(table_.begin(), table_.end(), [](int v) { return v >= 0; }));
}

std::vector<Tuple> PartialOperation::defined_points() const {
  std::vector<Tuple> out;
  for (std::size_t c = 0; c < table_.size(); ++c)
    if (table_[c] >= 0) out.push_back(decode(c));
  return out;
}

PartialOperation projection_op(int k, int arity, int which) {
  PartialOperation f(k, arity);
  for (std::size_t c = 0; c < f.table().size(); ++c) {
    Tuple t = f.decode(c);
    f.set(t, t[which]);
  }
  return f;
}

PartialOperation constant_op(int k, int arity, Value d) {
  PartialOperation f(k, arity);
  for (std::size_t c = 0; c < f.table().size(); ++c) f.set(f.decode(c), d);
  return f;
}

namespace {

// Odometer over index sequences of length a with entries < m.
bool next_seq(std::vector<int>& seq, int m) {
  for (int i = static_cast<int>(seq.size()) - 1; i >= 0; --i) {
    if (++seq[i] < m) return true;
    seq[i] = 0;
  }
  return false;
}

}  // namespace

PreserveResult preserves(const PartialOperation& f, const Relation& r, const std::string& name) {
  if (f.domain() != r.domain()) throw std::invalid_argument("preserves: domain mismatch");
  PreserveResult res;
  if (r.empty()) return res;
  const int a = f.arity(), m = static_cast<int>(r.size()), n = r.arity();
  std::vector<int> seq(a, 0);
  Tuple args(a), img(n);
  do {
    bool defined = true;
    for (int p = 0; p < n && defined; ++p) {
      for (int j = 0; j < a; ++j) args[j] = r[seq[j]][p];
      auto v = f.apply(args);
      if (!v) defined = false;
      else img[p] = *v;
    }
    if (defined && !r.contains(img)) {
      Witness w;
      w.op = f;
      for (int j : seq) w.tuples.push_back(r[j]);
      w.image = img;
      w.relation = name;
      res.preserved = false;
      res.witness = std::move(w);
      return res;
    }
  } while (next_seq(seq, m));
  return res;
}

bool replay(const Witness& w, const Relation& r) {
  if (static_cast<int>(w.tuples.size()) != w.op.arity()) return false;
  Tuple img(r.arity());
  for (const auto& t : w.tuples)
    if (!r.contains(t)) return false;
  for (int p = 0; p < r.arity(); ++p) {
    Tuple args;
    for (const auto& t : w.tuples) args.push_back(t[p]);
    auto v = w.op.apply(args);
    if (!v) return false;
    img[p] = *v;
  }
  return img == w.image && !r.contains(img);
}

namespace {

// A sequence of tuples of some relation G, seen through a column numbering:
// cols[q] is the index of column q among the numbered points.
struct SeqCheck {
  const Relation* rel;
  std::vector<int> cols;
  int last;  // largest entry of cols
};

// Builds, for every a-sequence of tuples of every relation in gamma whose
// columns all lie in the numbered point set, the data needed to test it once
// the point with index `last` is assigned.
std::vector<std::vector<SeqCheck>> build_checks(const Language& gamma, int a, int k,
                                                const std::vector<long>& point_index) {
  std::vector<std::vector<SeqCheck>> by_last;
  std::size_t npoints = 0;
  for (long idx : point_index)
    if (idx >= 0) npoints = std::max<std::size_t>(npoints, static_cast<std::size_t>(idx) + 1);
  by_last.resize(npoints);
  for (const auto& [_, g] : gamma.rels) {
    if (g.empty() || g.arity() == 0) continue;
    const int m = static_cast<int>(g.size());
    std::vector<int> seq(a, 0);
    do {
      SeqCheck sc{&g, std::vector<int>(g.arity()), -1};
      bool inside = true;
      for (int q = 0; q < g.arity() && inside; ++q) {
        std::size_t code = 0;
        for (int j = 0; j < a; ++j) code = code * k + g[seq[j]][q];
        long idx = point_index[code];
        if (idx < 0) inside = false;
        else {
          sc.cols[q] = static_cast<int>(idx);
          sc.last = std::max(sc.last, static_cast<int>(idx));
        }
      }
      if (inside) by_last[sc.last].push_back(std::move(sc));
    } while (next_seq(seq, m));
  }
  return by_last;
}

bool checks_pass(const std::vector<SeqCheck>& checks, const std::vector<int>& val, Tuple& buf) {
  for (const auto& sc : checks) {
    buf.resize(sc.cols.size());
    for (std::size_t q = 0; q < sc.cols.size(); ++q) buf[q] = static_cast<Value>(val[sc.cols[q]]);
    if (!sc.rel->contains(buf)) return false;
  }
  return true;
}

}  // namespace

PolymorphismList enumerate_polymorphisms(const Language& gamma, int arity, std::uint64_t node_budget) {
  const int k = gamma.k;
  PartialOperation proto(k, arity);
  const std::size_t npts = proto.table().size();
  std::vector<long> point_index(npts);
  for (std::size_t c = 0; c < npts; ++c) point_index[c] = static_cast<long>(c);
  auto checks = build_checks(gamma, arity, k, point_index);
  PolymorphismList out;
  std::vector<int> val(npts, -1);
  Tuple buf;
  bool over = false;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (over) return;
    if (i == npts) {
      PartialOperation f(k, arity);
      for (std::size_t c = 0; c < npts; ++c) f.set(f.decode(c), static_cast<Value>(val[c]));
      out.ops.push_back(std::move(f));
      return;
    }
    for (int d = 0; d < k; ++d) {
      if (++out.nodes > node_budget) {
        over = true;
        return;
      }
      val[i] = d;
      if (checks_pass(checks[i], val, buf)) self(self, i + 1);
      if (over) return;
    }
    val[i] = -1;
  };
  rec(rec, 0);
  if (over) {
    out.complete = false;
    out.ops.clear();
  }
  return out;
}

std::optional<Witness> violating_partial_op(const Relation& r, const Language& gamma,
                                            const std::string& name) {
  if (r.size() > 3) throw UnsupportedError("violating_partial_op supports |R| <= 3 only");
  if (!gamma.rels.empty() && gamma.k != r.domain())
    throw std::invalid_argument("violating_partial_op: domain mismatch");
  const int m = static_cast<int>(r.size()), n = r.arity(), k = r.domain();
  Tuple buf;
  for (int a = 1; a <= m; ++a) {
    std::size_t npts = 1;
    for (int j = 0; j < a; ++j) npts *= k;
    std::vector<int> seq(a, 0);
    do {
      // number the distinct columns of (t_seq[0],...,t_seq[a-1]) by first occurrence
      std::vector<long> point_index(npts, -1);
      std::vector<std::size_t> points;
      std::vector<int> pos_point(n);
      for (int p = 0; p < n; ++p) {
        std::size_t code = 0;
        for (int j = 0; j < a; ++j) code = code * k + r[seq[j]][p];
        if (point_index[code] < 0) {
          point_index[code] = static_cast<long>(points.size());
          points.push_back(code);
        }
        pos_point[p] = static_cast<int>(point_index[code]);
      }
      auto checks = build_checks(gamma, a, k, point_index);
      const int np = static_cast<int>(points.size());
      std::vector<int> val(np, -1);
      Tuple img(n);
      bool found = false;
      auto rec = [&](auto&& self, int i) -> void {
        if (i == np) {
          for (int p = 0; p < n; ++p) img[p] = static_cast<Value>(val[pos_point[p]]);
          if (!r.contains(img)) found = true;
          return;
        }
        for (int d = 0; d < k && !found; ++d) {
          val[i] = d;
          if (checks_pass(checks[i], val, buf)) self(self, i + 1);
        }
      };
      rec(rec, 0);
      if (found) {
        Witness w;
        w.op = PartialOperation(k, a);
        for (int i = 0; i < np; ++i) w.op.set(w.op.decode(points[i]), static_cast<Value>(val[i]));
        for (int j : seq) w.tuples.push_back(r[j]);
        w.image = img;
        w.relation = name;
        return w;
      }
    } while (next_seq(seq, m));
  }
  return std::nullopt;
}

bool qfpp_definable(const Relation& r, const Language& gamma) {
  return !violating_partial_op(r, gamma).has_value();
}

Tri pp_definable(const Relation& r, const Language& gamma, std::uint64_t node_budget) {
  if (r.empty()) return Tri::yes;
  auto pols = enumerate_polymorphisms(gamma, static_cast<int>(r.size()), node_budget);
  if (!pols.complete) return Tri::unknown;
  for (const auto& f : pols.ops)
    if (!preserves(f, r).preserved) return Tri::no;
  return Tri::yes;
}

void write_witness(std::ostream& os, const Witness& w) {
  os << "arity " << w.op.arity() << "\n";
  for (const auto& t : w.tuples) {
    os << "row";
    for (Value v : t) os << " " << int(v);
    os << "\n";
  }
  os << "image";
  for (Value v : w.image) os << " " << int(v);
  os << "\nviolates " << w.relation << "\n";
}

Witness read_witness(std::istream& is, int k) {
  std::string kw;
  int a = 0;
  if (!(is >> kw >> a) || kw != "arity" || a < 1) throw std::invalid_argument("witness text: bad arity line");
  std::string line;
  std::getline(is, line);
  auto read_row = [&](const std::string& tag) {
    if (!std::getline(is, line)) throw std::invalid_argument("witness text: truncated");
    std::istringstream ls(line);
    std::string t;
    ls >> t;
    if (t != tag) throw std::invalid_argument("witness text: expected " + tag);
    Tuple row;
    int v;
    while (ls >> v) row.push_back(static_cast<Value>(v));
    return row;
  };
  Witness w;
  for (int j = 0; j < a; ++j) w.tuples.push_back(read_row("row"));
  w.image = read_row("image");
  if (!(is >> kw >> w.relation) || kw != "violates") throw std::invalid_argument("witness text: bad relation line");
  w.op = PartialOperation(k, a);
  for (std::size_t p = 0; p < w.image.size(); ++p) {
    Tuple args;
    for (const auto& t : w.tuples) {
      if (t.size() != w.image.size()) throw std::invalid_argument("witness text: row length mismatch");
      args.push_back(t[p]);
    }
    auto prev = w.op.apply(args);
    if (prev && *prev != w.image[p]) throw std::invalid_argument("witness text: not a function");
    w.op.set(args, w.image[p]);
  }
  return w;
}

}  // namespace gcsp
