#include "galois_csp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <climits>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include "galois_csp/clones.hpp"
#include "galois_csp/solvers.hpp"

namespace gcsp {

namespace {

using Rng = std::mt19937_64;

std::uint64_t below(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  std::uint64_t out[1];
  std::uint32_t parts[2];
  seq.generate(parts, parts + 2);
  out[0] = (static_cast<std::uint64_t>(parts[0]) << 32) | parts[1];
  return out[0];
}

bool try_generate(const GeneratorConfig& cfg, const std::vector<std::pair<std::string, Relation>>& rels, Rng& rng,
                  Instance& out) {
  Instance inst;
  inst.k = cfg.k;
  inst.num_vars = cfg.n;
  std::vector<int> idx;
  for (const auto& [name, r] : rels) idx.push_back(inst.add_relation(name, r));
  std::vector<int> deg(cfg.n, 0), planted(cfg.n, -1);
  for (int c = 0; c < cfg.m; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const int ri = static_cast<int>(below(rng, rels.size()));
      const Relation& r = rels[ri].second;
      std::vector<int> vs(r.arity());
      std::vector<int> trial = planted;
      bool ok = true;
      if (cfg.planted) {
        if (r.empty()) continue;
        // choose the satisfied tuple first, then variables compatible with it
        const Tuple& t = r[below(rng, r.size())];
        std::vector<int> cand;
        for (int p = 0; p < r.arity() && ok; ++p) {
          cand.clear();
          for (int v = 0; v < cfg.n; ++v)
            if ((trial[v] < 0 || trial[v] == t[p]) &&
                !(cfg.distinct && std::find(vs.begin(), vs.begin() + p, v) != vs.begin() + p))
              cand.push_back(v);
          if (cand.empty()) ok = false;
          else {
            vs[p] = cand[below(rng, cand.size())];
            trial[vs[p]] = t[p];
          }
        }
      } else {
        for (int& v : vs) v = static_cast<int>(below(rng, cfg.n));
        if (cfg.distinct) ok = std::set<int>(vs.begin(), vs.end()).size() == vs.size();
      }
      if (!ok) continue;
      if (cfg.B > 0) {
        for (int v : std::set<int>(vs.begin(), vs.end())) ok &= deg[v] < cfg.B;
        if (!ok) continue;
      }
      planted = std::move(trial);
      for (int v : std::set<int>(vs.begin(), vs.end())) ++deg[v];
      inst.add_constraint(idx[ri], std::move(vs));
      placed = true;
    }
    if (!placed) return false;
  }
  for (int u = 0; u < cfg.unary; ++u) {
    int v = static_cast<int>(below(rng, cfg.n));
    unsigned full = (1u << cfg.k) - 1;
    unsigned mask = 1 + static_cast<unsigned>(below(rng, full));
    if (cfg.planted) {
      if (planted[v] < 0) planted[v] = static_cast<int>(below(rng, cfg.k));
      mask |= 1u << planted[v];
    }
    inst.add_constraint(inst.add_relation(unary_name(mask), unary_relation(cfg.k, mask)), {v});
  }
  out = std::move(inst);
  return true;
}

}  // namespace

Instance generate(const GeneratorConfig& cfg, const std::vector<std::pair<std::string, Relation>>& rels) {
  if (cfg.n < 0 || cfg.m < 0 || cfg.unary < 0) throw std::invalid_argument("generate: negative size");
  if ((cfg.m > 0 || cfg.unary > 0) && cfg.n == 0) throw std::invalid_argument("generate: constraints need variables");
  if (cfg.m > 0 && rels.empty()) throw std::invalid_argument("generate: no relations to draw from");
  for (const auto& [name, r] : rels)
    if (r.domain() != cfg.k) throw std::invalid_argument("generate: relation '" + name + "' has the wrong domain");
  if (cfg.B > 0 && static_cast<long>(cfg.m) > static_cast<long>(cfg.n) * cfg.B)
    throw std::invalid_argument("generate: degree bound infeasible for n and m");
  Rng rng(cfg.seed);
  Instance out;
  for (int restart = 0; restart < 100; ++restart)
    if (try_generate(cfg, rels, rng, out)) return out;
  throw std::invalid_argument("generate: could not meet the degree bound or planted model within the retry cap");
}

Instance generate(const GeneratorConfig& cfg, const Relation& r, const std::string& name) {
  return generate(cfg, std::vector<std::pair<std::string, Relation>>{{name, r}});
}

Instance generate_adversarial_rd(int k, int n, std::uint64_t seed) {
  if (k < 3) throw std::invalid_argument("adversarial generator needs k >= 3");
  const Relation rd = make_rd(k);
  const int k2 = k * k;
  if (n < k) throw std::invalid_argument("adversarial generator needs n >= k");
  std::vector<int> three, other;
  for (int p = 0; p < rd.arity(); ++p) (choice_class(rd, p) == 3 ? three : other).push_back(p);
  Rng rng(seed);
  auto shuffle = [&](std::vector<int>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(rng, i)]);
  };
  Instance inst;
  inst.k = k;
  inst.num_vars = n;
  const int rel = inst.add_relation("rd", rd);
  int next = 0;
  // first constraint: k fresh variables, k^2 positions each
  {
    std::vector<int> pos(rd.arity());
    std::iota(pos.begin(), pos.end(), 0);
    shuffle(pos);
    std::vector<int> vs(rd.arity());
    for (int i = 0; i < rd.arity(); ++i) vs[pos[i]] = next + i / k2;
    next += k;
    inst.add_constraint(rel, std::move(vs));
  }
  while (next + (k - 1) <= n) {
    std::vector<int> vs(rd.arity(), -1);
    std::vector<int> old = other;
    shuffle(old);
    for (int i = 0; i < k2; ++i) vs[old[i]] = static_cast<int>(below(rng, next));
    std::vector<int> rest;
    for (int p = 0; p < rd.arity(); ++p)
      if (vs[p] < 0) rest.push_back(p);
    shuffle(rest);
    for (std::size_t i = 0; i < rest.size(); ++i) vs[rest[i]] = next + static_cast<int>(i) / k2;
    next += k - 1;
    inst.add_constraint(rel, std::move(vs));
  }
  return inst;
}

int thread_count() {
  if (const char* env = std::getenv("GALOIS_CSP_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, const std::function<void(int)>& body, int threads) {
  if (threads <= 0) threads = thread_count();
  threads = std::min(threads, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next++) < count;) body(i);
    });
  for (auto& th : pool) th.join();
}

namespace {

using RelList = std::vector<std::pair<std::string, Relation>>;

struct Fixture {
  RelList rels;
  int input_k = 2;
  int B = 0;
  bool unary = false;
  bool lv = false;
  long lv_d = 0, lv_k1 = 0, lv_k2 = 0, lv_L = 0;
  bool lv_efpp = false;
  std::vector<std::string> notes;
  std::function<Reduced(const Instance&)> run;
};

Relation move_three_choice_last(const Relation& r) {
  std::vector<int> order;
  for (int p = 0; p < r.arity(); ++p)
    if (choice_class(r, p) != 3) order.push_back(p);
  for (int p = 0; p < r.arity(); ++p)
    if (choice_class(r, p) == 3) order.push_back(p);
  return project(r, order);
}

Relation append_columns(const Relation& r, const std::vector<Tuple>& extra) {
  auto cols = r.columns();
  cols.insert(cols.end(), extra.begin(), extra.end());
  return from_columns(r.domain(), 3, cols);
}

Relation rd_low(int k) {
  Relation rd = make_rd(k);
  std::vector<int> keep;
  for (int p = 0; p < rd.arity(); ++p)
    if (choice_class(rd, p) != 3) keep.push_back(p);
  return project(rd, keep);
}

Language small_language(int k) {
  if (k == 2) return make_satk(3);
  Language g;
  g.k = k;
  std::vector<Tuple> neq, le;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a != b) neq.push_back({static_cast<Value>(a), static_cast<Value>(b)});
      if (a <= b) le.push_back({static_cast<Value>(a), static_cast<Value>(b)});
    }
  g.add("neq", Relation(k, 2, neq));
  g.add("le", Relation(k, 2, le));
  return g;
}

// Relations obtained by evaluating fixed random quantifier-free formulas.
RelList definable_relations(const Language& gamma, std::map<std::string, PPFormula>& defs) {
  Rng rng(20240601);
  std::vector<std::string> names;
  for (const auto& [n, _] : gamma.rels) names.push_back(n);
  RelList out;
  for (int i = 0; i < 3; ++i) {
    PPFormula phi;
    phi.num_free = 3 + i % 2;
    for (int a = 0; a < 3; ++a) {
      const auto& name = names[below(rng, names.size())];
      Atom at{name, {}};
      for (int j = 0; j < gamma.at(name).arity(); ++j) at.args.push_back(static_cast<int>(below(rng, phi.num_free)));
      phi.atoms.push_back(at);
    }
    if (i == 2) phi.atoms.push_back({"eq", {0, phi.num_free - 1}});
    Relation r = evaluate(phi, gamma);
    std::string name = "d" + std::to_string(i);
    defs[name] = canonical_qfpp(r, gamma);
    out.push_back({name, r});
  }
  return out;
}

Reduced identity_step(const Instance& inst) {
  Reduced r{inst, {}};
  r.report.step = "identity";
  r.report.vars_in = r.report.vars_out = inst.num_vars;
  r.report.constraints_in = r.report.constraints_out = static_cast<int>(inst.constraints.size());
  return r;
}

Language with_unaries(int k, const std::string& name, const Relation& r) {
  Language g = all_unary(k);
  g.add(name, r);
  return g;
}

Fixture make_fixture(const std::string& step, int k) {
  if (k != 2 && k != 3) throw std::invalid_argument("check_equisat: k must be 2 or 3");
  Fixture fx;
  fx.input_k = k;
  const Relation rd = make_rd(k);
  if (step == "identity") {
    fx.rels = {{"rd", rd}};
    fx.run = identity_step;
  } else if (step == "qfpp_inline") {
    auto gamma = std::make_shared<Language>(small_language(k));
    auto defs = std::make_shared<std::map<std::string, PPFormula>>();
    fx.rels = definable_relations(*gamma, *defs);
    fx.run = [gamma, defs](const Instance& i) { return qfpp_inline(i, *defs, *gamma); };
  } else if (step == "dedup_3choice") {
    Relation r = k == 3 ? saturate(example_r_prime()).relation : make_rb();
    if (k == 2) fx.notes.push_back("no 3-choice positions exist over a Boolean domain");
    fx.rels = {{"R", r}};
    fx.run = [r](const Instance& i) { return dedup_3choice(i, r); };
  } else if (step == "drop_3choice_args" || step == "drop_3choice_args_literal") {
    Relation r = k == 3 ? move_three_choice_last(saturate(example_r_prime()).relation) : make_rb();
    int n2 = 0;
    for (int p = 0; p < r.arity(); ++p) n2 += choice_class(r, p) != 3;
    std::vector<int> head(n2);
    std::iota(head.begin(), head.end(), 0);
    Relation small = project(r, head);
    if (k == 2) fx.notes.push_back("no 3-choice positions exist over a Boolean domain");
    CvOptions o;
    o.literal = step == "drop_3choice_args_literal";
    fx.rels = {{"R", r}};
    fx.run = [r, small, o](const Instance& i) { return drop_3choice_args(i, r, small, o); };
  } else if (step == "add_2choice_args") {
    Relation r = k == 3 ? saturate(example_r()).relation : make_rb();
    std::vector<Tuple> extra = k == 3 ? std::vector<Tuple>{{1, 1, 2}, {2, 1, 1}} : std::vector<Tuple>{{0, 1, 1}};
    Relation big = append_columns(r, extra);
    if (k == 2) fx.notes.push_back("Boolean appended columns necessarily duplicate existing ones");
    fx.rels = {{"Rbig", big}};
    fx.run = [big, r](const Instance& i) { return add_2choice_args(i, big, r); };
  } else if (step == "lift_rd" || step == "lift_rd_add_then_drop") {
    const bool atd = step == "lift_rd_add_then_drop";
    Relation r = k == 2 ? make_rb() : atd ? rd_low(3) : saturate(example_r()).relation;
    fx.rels = {{"rd", rd}};
    LiftOrder order = atd ? LiftOrder::add_then_drop : LiftOrder::drop_then_add;
    fx.run = [r, order](const Instance& i) { return lift_rd(i, r, order); };
  } else if (step == "eliminate_unary") {
    fx.rels = {{"rd", rd}};
    fx.unary = true;
    fx.run = [](const Instance& i) { return eliminate_unary(i); };
  } else if (step == "lv_reduce_3sat") {
    Relation rnn = make_rnn();
    fx.rels = {{"rnn", rnn}};
    fx.input_k = 2;
    fx.B = 2;
    fx.lv = true;
    auto interp = std::make_shared<Interpretation>();
    interp->d = 1;
    interp->F = Relation(k, 1, {{0}, {1}});
    interp->f = {0, 1};
    interp->e_size = 2;
    interp->def_F.num_free = 1;
    std::shared_ptr<Language> gamma;
    if (k == 2) {
      gamma = std::make_shared<Language>(with_unaries(2, "rnn", rnn));
      interp->preimage_defs["rnn"] = atom_formula("rnn", 6);
    } else {
      gamma = std::make_shared<Language>(with_unaries(3, "rnn3", Relation(3, 6, rnn.tuples())));
      interp->def_F.atoms.push_back({unary_name(3u), {0}});
      interp->preimage_defs["rnn"] = atom_formula("rnn3", 6);
    }
    fx.lv_d = 1;
    fx.lv_L = 1;
    fx.lv_efpp = true;
    fx.run = [gamma, interp](const Instance& i) { return lv_reduce_3sat(i, *gamma, *interp); };
  } else if (step == "reduce_easiest") {
    auto gamma = std::make_shared<Language>(k == 2 ? with_unaries(2, "rbb", make_rb()) : with_unaries(3, "rex", example_r()));
    fx.rels = {{"rd", rd}};
    fx.run = [gamma](const Instance& i) { return reduce_easiest(i, *gamma); };
  } else {
    throw std::invalid_argument("check_equisat: unknown step '" + step + "'");
  }
  return fx;
}

struct ItemResult {
  bool generated = false, ran = false, pass = false, sat_in = false, unsupported = false;
  long delta = 0, lv_excess = LONG_MIN, deg_excess = LONG_MIN;
  std::string message;
};

}  // namespace

std::vector<std::string> equisat_steps() {
  return {"identity",         "qfpp_inline",     "dedup_3choice",  "drop_3choice_args", "drop_3choice_args_literal",
          "add_2choice_args", "lift_rd",         "lift_rd_add_then_drop", "eliminate_unary", "lv_reduce_3sat",
          "reduce_easiest"};
}

EquisatReport check_equisat(const std::string& step, const EquisatConfig& cfg) {
  Fixture fx = make_fixture(step, cfg.k);
  EquisatReport rep;
  rep.step = step;
  rep.k = cfg.k;
  rep.notes = fx.notes;
  std::vector<ItemResult> items(cfg.count);
  SolveOptions budget;
  budget.node_budget = 20'000'000;
  parallel_for(
      cfg.count,
      [&](int idx) {
        ItemResult& it = items[idx];
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        GeneratorConfig g;
        g.k = fx.input_k;
        g.n = cfg.n_min + static_cast<int>(below(rng, cfg.n_max - cfg.n_min + 1));
        int m_hi = cfg.m_max;
        if (fx.lv) {
          g.n = std::max(g.n, 6);
          m_hi = std::max(1, std::min(m_hi, (g.n - 1) / 3));
        }
        g.m = std::min(m_hi, cfg.m_min) + static_cast<int>(below(rng, std::max(0, m_hi - std::min(m_hi, cfg.m_min)) + 1));
        g.B = fx.B;
        g.distinct = fx.lv;
        g.unary = fx.unary ? 1 + static_cast<int>(below(rng, g.n)) : 0;
        g.planted = idx % 2 == 0;
        if (g.planted) g.n = std::max(g.n, g.k);
        g.seed = rng();
        Instance in;
        try {
          in = generate(g, fx.rels);
          it.generated = true;
        } catch (const std::exception& e) {
          it.message = std::string("generation: ") + e.what();
          return;
        }
        Reduced red;
        try {
          red = fx.run(in);
          it.ran = true;
        } catch (const UnsupportedError& e) {
          it.unsupported = true;
          it.message = e.what();
          return;
        } catch (const std::exception& e) {
          it.message = std::string("reduction: ") + e.what() + "\n" + to_text(in);
          return;
        }
        const Instance& out = red.instance;
        it.delta = static_cast<long>(out.num_vars) - in.num_vars;
        if (fx.lv && !is_canonical_unsat(out)) {
          long n = in.num_vars;
          long bound = n * red.report.d + 2 * n * red.report.k1 + red.report.k2;
          it.lv_excess = static_cast<long>(out.num_vars) - bound;
          auto deg = out.degrees();
          long mx = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
          if (fx.lv_efpp) it.deg_excess = mx - 3L * red.report.L;
        }
        if (!cfg.verify) {
          it.pass = true;
          return;
        }
        auto a = brute_force(in, budget), b = brute_force(out, budget);
        if (a.status == Status::unknown || b.status == Status::unknown) {
          it.ran = false;
          it.message = "oracle budget exceeded\n" + to_text(in);
          return;
        }
        it.sat_in = a.status == Status::sat;
        it.pass = a.status == b.status;
        if (!it.pass)
          it.message = "input " + to_string(a.status) + ", output " + to_string(b.status) + "\n" + to_text(in);
      },
      cfg.threads);
  bool first = true;
  for (const auto& it : items) {
    ++rep.total;
    if (it.unsupported) {
      rep.supported = false;
      if (rep.notes.empty() || rep.notes.back() != it.message) rep.notes.push_back("unsupported: " + it.message);
      ++rep.errors;
      continue;
    }
    if (!it.generated || !it.ran) {
      ++rep.errors;
      if (rep.failures.size() < 5) rep.failures.push_back(it.message);
      continue;
    }
    if (it.pass) ++rep.passed;
    else {
      ++rep.failed;
      if (rep.failures.size() < 5) rep.failures.push_back(it.message);
    }
    rep.sat_inputs += it.sat_in;
    rep.max_delta = first ? it.delta : std::max(rep.max_delta, it.delta);
    if (it.lv_excess != LONG_MIN) rep.max_lv_excess = first ? it.lv_excess : std::max(rep.max_lv_excess, it.lv_excess);
    if (it.deg_excess != LONG_MIN)
      rep.max_degree_excess = first ? it.deg_excess : std::max(rep.max_degree_excess, it.deg_excess);
    first = false;
  }
  return rep;
}

namespace {

Relation random_three_tuple(int k, int arity, Rng& rng) {
  std::vector<Tuple> ts;
  while (ts.size() < 3) {
    Tuple t(arity);
    for (auto& x : t) x = static_cast<Value>(below(rng, k));
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  return Relation(k, arity, ts);
}

}  // namespace

SolverCheckReport check_solvers(const SolverCheckConfig& cfg) {
  if (cfg.k < 2) throw std::invalid_argument("check_solvers: k must be at least 2");
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min || cfg.m_min < 1 || cfg.m_max < cfg.m_min)
    throw std::invalid_argument("check_solvers: bad size ranges");
  struct Item {
    bool rd_ok = true, gen_ok = true, undecided = false, sat = false;
    std::string message;
  };
  const Relation rd = make_rd(cfg.k);
  std::vector<Item> items(cfg.count);
  SolveOptions budget;
  budget.node_budget = 20'000'000;
  parallel_for(
      cfg.count,
      [&](int idx) {
        Item& it = items[idx];
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        GeneratorConfig g;
        g.k = cfg.k;
        g.n = cfg.n_min + static_cast<int>(below(rng, cfg.n_max - cfg.n_min + 1));
        g.m = cfg.m_min + static_cast<int>(below(rng, cfg.m_max - cfg.m_min + 1));
        g.unary = static_cast<int>(below(rng, g.n + 1));
        g.planted = idx % 2 == 0;
        if (g.planted) g.n = std::max(g.n, cfg.k);
        g.seed = rng();
        Instance a = generate(g, rd, "rd");
        RelList rels;
        const int nrel = 1 + static_cast<int>(below(rng, 2));
        const int lo = cfg.k == 2 ? 2 : 1;
        for (int i = 0; i < nrel; ++i)
          rels.emplace_back("s" + std::to_string(i), random_three_tuple(cfg.k, lo + static_cast<int>(below(rng, 5 - lo)), rng));
        g.planted = idx % 2 == 0;
        g.seed = rng();
        Instance b = generate(g, rels);

        auto oa = brute_force(a, budget), ob = brute_force(b, budget);
        RdOptions ro;
        ro.solve = budget;
        auto ra = branch_rd(a, ro);
        auto gb = branch_generic(b, budget);
        if (oa.status == Status::unknown || ob.status == Status::unknown || ra.status == Status::unknown ||
            gb.status == Status::unknown) {
          it.undecided = true;
          return;
        }
        it.sat = oa.status == Status::sat;
        it.rd_ok = oa.status == ra.status;
        it.gen_ok = ob.status == gb.status;
        if (!it.rd_ok) it.message += "branch_rd " + to_string(ra.status) + " vs " + to_string(oa.status) + "\n" + to_text(a);
        if (!it.gen_ok)
          it.message += "branch_generic " + to_string(gb.status) + " vs " + to_string(ob.status) + "\n" + to_text(b);
      },
      cfg.threads);
  SolverCheckReport rep;
  rep.k = cfg.k;
  for (const auto& it : items) {
    ++rep.total;
    rep.undecided += it.undecided;
    rep.sat_inputs += it.sat;
    rep.rd_disagreements += !it.rd_ok;
    rep.generic_disagreements += !it.gen_ok;
    if (!it.message.empty() && rep.failures.size() < 5) rep.failures.push_back(it.message);
  }
  return rep;
}

ExponentFit fit_exponent(int k, const std::vector<BenchRow>& rows) {
  ExponentFit f;
  f.k = k;
  const int removal = k >= 3 ? (k * (k - 1) * (k - 2)) / (k * k) : 0;
  f.floored_exponent = removal > 0 ? 1.0 / removal : 0;
  f.unfloored_exponent = k >= 3 ? static_cast<double>(k * k) / (k * (k - 1) * (k - 2)) : 0;
  std::vector<double> xs, ys;
  std::set<int> ns;
  for (const auto& r : rows) {
    if (r.k != k || r.censored || r.nodes == 0) continue;
    xs.push_back(r.n);
    ys.push_back(std::log(static_cast<double>(r.nodes)) / std::log(3.0));
    ns.insert(r.n);
    if (f.floored_exponent > 0)
      f.C = std::max(f.C, static_cast<double>(r.nodes) / std::pow(3.0, r.n * f.floored_exponent));
  }
  f.distinct_n = static_cast<int>(ns.size());
  f.valid = f.distinct_n >= 4;
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    f.slope_log3 = sxx > 0 ? sxy / sxx : 0;
    f.intercept_log3 = my - f.slope_log3 * mx;
  }
  f.slope_bits = f.slope_log3 * std::log2(3.0);
  return f;
}

BenchResult bench_scaling(const BenchConfig& cfg) {
  struct Job {
    int k, n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int k : cfg.ks)
    for (int n : cfg.ns)
      for (auto s : cfg.seeds) jobs.push_back({k, n, s});
  BenchResult res;
  res.rows.resize(jobs.size());
  parallel_for(
      static_cast<int>(jobs.size()),
      [&](int i) {
        const Job& j = jobs[i];
        BenchRow& row = res.rows[i];
        row.k = j.k;
        row.n = j.n;
        row.seed = j.seed;
        Instance inst = generate_adversarial_rd(j.k, j.n, j.seed);
        RdOptions o;
        o.eager_conflicts = cfg.eager;
        o.solve.node_budget = cfg.node_budget;
        o.solve.time_budget_ms = cfg.budget_ms;
        auto r = branch_rd(inst, o);
        row.nodes = r.node_count;
        row.status = to_string(r.status);
        row.time_ms = r.time_ms;
        row.censored = r.status == Status::unknown;
      },
      cfg.threads);
  for (int k : cfg.ks) res.fits.push_back(fit_exponent(k, res.rows));
  return res;
}

void write_bench_csv(std::ostream& os, const BenchResult& r, bool with_time) {
  os << "k,n,seed,nodes,status," << (with_time ? "time_ms," : "") << "censored\n";
  for (const auto& row : r.rows) {
    os << row.k << "," << row.n << "," << row.seed << "," << row.nodes << "," << row.status << ",";
    if (with_time) os << row.time_ms << ",";
    os << (row.censored ? 1 : 0) << "\n";
  }
}

void write_fits_csv(std::ostream& os, const BenchResult& r) {
  os << "k,distinct_n,valid,slope_log3,slope_bits,intercept_log3,C,floored_exponent,unfloored_exponent\n";
  for (const auto& f : r.fits)
    os << f.k << "," << f.distinct_n << "," << (f.valid ? 1 : 0) << "," << f.slope_log3 << "," << f.slope_bits << ","
       << f.intercept_log3 << "," << f.C << "," << f.floored_exponent << "," << f.unfloored_exponent << "\n";
}

}  // namespace gcsp
