// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "galois_csp/clones.hpp"
#include "galois_csp/extensions.hpp"
#include "galois_csp/formula.hpp"
#include "galois_csp/harness.hpp"
#include "oracle.hpp"

using namespace gcsp;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail, double secs) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void fixtures_check() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> bad;
  if (make_rd(2) != fixtures::rneqneqneq()) bad.push_back("make_rd(2)");
  if (make_rd(3).arity() != 27) bad.push_back("make_rd(3) arity");
  if (!equal_up_to_column_permutation(saturate(fixtures::r_ex()).relation, fixtures::r_ex_saturated()))
    bad.push_back("saturation");
  auto a = is_saturated(fixtures::r_ex());
  if (a.saturated || a.missing != Tuple{0, 2, 0}) bad.push_back("missing column");
  auto b = is_saturated(fixtures::r_ex_prime());
  if (b.saturated || b.column != 6 || choice_class(fixtures::r_ex_prime(), 6) != 3) bad.push_back("3-choice position");
  std::string detail = bad.empty() ? "all fixtures match" : "mismatch:";
  for (const auto& s : bad) detail += " " + s;
  report(1, "fixture fidelity", bad.empty(), detail, seconds_since(t0));
}

// Boolean relations of arity 1..4 with at most 3 tuples, in a fixed order.
std::vector<Relation> small_boolean_relations() {
  std::vector<Relation> out;
  for (int a = 1; a <= 4; ++a) {
    std::vector<Tuple> tuples;
    oracle::for_each_assignment(2, a, [&](const std::vector<Value>& t) {
      tuples.push_back(t);
      return true;
    });
    const int total = static_cast<int>(tuples.size());
    for (int s = 0; s <= std::min(3, total); ++s) {
      std::vector<int> idx(s);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        std::vector<Tuple> ts;
        for (int i : idx) ts.push_back(tuples[i]);
        out.emplace_back(2, a, ts);
        int i = s - 1;
        while (i >= 0 && idx[i] == total - s + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }
  return out;
}

std::vector<Tuple> orbit_key(const Relation& r) {
  std::vector<int> perm(r.arity());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Tuple> best;
  bool first = true;
  do {
    std::vector<Tuple> q;
    for (const auto& t : r.tuples()) {
      Tuple u(r.arity());
      for (int p = 0; p < r.arity(); ++p) u[p] = t[perm[p]];
      q.push_back(u);
    }
    std::sort(q.begin(), q.end());
    if (first || q < best) best = q;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every R is checked; language members are taken up to coordinate
// permutation, which leaves the weak partial co-clone unchanged.
void galois_check() {
  auto t0 = std::chrono::steady_clock::now();
  const auto all = small_boolean_relations();
  std::vector<Relation> reps;
  std::set<std::pair<int, std::vector<Tuple>>> seen;
  for (const auto& r : all)
    if (seen.insert({r.arity(), orbit_key(r)}).second) reps.push_back(r);
  std::vector<Language> langs(1);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    Language l;
    l.add("g1", reps[i]);
    langs.push_back(l);
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      Language m = l;
      m.add("g2", reps[j]);
      langs.push_back(m);
    }
  }
  long checks = 0, discrepancies = 0, unsound = 0, definable = 0;
  std::string first_bad;
  for (const auto& l : langs)
    for (const auto& r : all) {
      auto w = violating_partial_op(r, l);
      const bool qf = evaluate(canonical_qfpp(r, l), l) == r;
      ++checks;
      definable += qf;
      if (w.has_value() == qf) {
        if (++discrepancies == 1) first_bad = to_string(r);
      }
      if (w && !replay(*w, r)) ++unsound;
    }
  std::ostringstream d;
  d << all.size() << " relations x " << langs.size() << " languages (" << reps.size()
    << " member orbits), " << checks << " checks, " << definable << " definable, " << discrepancies
    << " discrepancies, " << unsound << " witnesses failing replay";
  if (!first_bad.empty()) d << ", first " << first_bad;
  report(2, "Galois consistency", discrepancies == 0 && unsound == 0, d.str(), seconds_since(t0));
}

Relation random_boolean_three_tuple(std::mt19937_64& rng, int arity) {
  std::vector<Tuple> ts;
  while (ts.size() < 3) {
    Tuple t(arity);
    for (auto& v : t) v = static_cast<Value>(rng() % 2);
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  return Relation(2, arity, ts);
}

void saturation_check() {
  auto t0 = std::chrono::steady_clock::now();
  Language ex;
  ex.k = 3;
  ex.add("R", fixtures::r_ex());
  const bool ex_ok = !violating_partial_op(saturate(fixtures::r_ex()).relation, ex).has_value();
  std::mt19937_64 rng(2024);
  int witnesses = 0, extensions = 0, extension_witnesses = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    Relation r = random_boolean_three_tuple(rng, 2 + static_cast<int>(rng() % 7));
    Language l;
    l.k = 2;
    l.add("R", r);
    const bool w = violating_partial_op(saturate(r).relation, l).has_value();
    witnesses += w;
    if (w && first.empty()) first = to_string(r);
    if (detect_rb_extension(r)) {
      ++extensions;
      extension_witnesses += w;
    }
  }
  // planted extensions: the eight pattern columns plus random extras
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + i % 2;
    const Value a = static_cast<Value>(rng() % k);
    const Value b = static_cast<Value>((a + 1 + rng() % (k - 1)) % k);
    std::vector<Tuple> cols;
    for (const auto& p : rb_patterns(a, b)) cols.push_back({p[0], p[1], p[2]});
    for (int e = static_cast<int>(rng() % 4); e > 0; --e)
      cols.push_back({Value(rng() % k), Value(rng() % k), Value(rng() % k)});
    std::shuffle(cols.begin(), cols.end(), rng);
    Relation r = from_columns(k, 3, cols);
    Language l;
    l.k = k;
    l.add("R", r);
    ++extensions;
    extension_witnesses += violating_partial_op(saturate(r).relation, l).has_value();
  }
  std::ostringstream d;
  d << "k=3 example " << (ex_ok ? "no witness" : "WITNESS") << "; random Boolean: " << witnesses
    << "/100 witnesses";
  if (!first.empty()) d << " (first " << first << ")";
  d << "; R^B-extensions (random hits plus 100 planted, k=2,3): " << extension_witnesses << "/" << extensions << " witnesses";
  report(3, "saturation stays in weak co-clone", ex_ok && witnesses == 0, d.str(), seconds_since(t0));
}

const std::vector<std::string> kSteps = {"qfpp_inline", "dedup_3choice",   "drop_3choice_args", "add_2choice_args",
                                         "lift_rd",     "eliminate_unary", "lv_reduce_3sat",    "reduce_easiest"};

EquisatConfig batch(int k) {
  EquisatConfig c;
  c.k = k;
  c.count = 1000;
  c.n_min = 2;
  c.n_max = k == 2 ? 10 : 8;
  return c;
}

std::map<std::pair<std::string, int>, EquisatReport> soundness_check() {
  auto t0 = std::chrono::steady_clock::now();
  std::map<std::pair<std::string, int>, EquisatReport> reps;
  long failed = 0, errors = 0, total = 0;
  std::string detail, first;
  for (const auto& step : kSteps)
    for (int k : {2, 3}) {
      auto r = check_equisat(step, batch(k));
      total += r.total;
      failed += r.failed;
      errors += r.errors;
      if ((r.failed || r.errors) && first.empty()) {
        first = step + " k=" + std::to_string(k) + ": " + std::to_string(r.failed) + " failed, " +
                std::to_string(r.errors) + " errors";
        if (!r.failures.empty()) first += "; " + r.failures.front().substr(0, r.failures.front().find('\n'));
      }
      reps[{step, k}] = r;
    }
  std::ostringstream d;
  d << kSteps.size() << " steps x k in {2,3} x 1000: " << total << " instances, " << failed << " failures, " << errors
    << " errors";
  if (!first.empty()) d << "; " << first;
  report(4, "reduction soundness", failed == 0 && errors == 0, d.str(), seconds_since(t0));
  return reps;
}

void accounting_check(const std::map<std::pair<std::string, int>, EquisatReport>& at_n) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> bad;
  std::ostringstream deltas;
  for (const auto& step : kSteps) {
    if (step == "lv_reduce_3sat") continue;
    for (int k : {2, 3}) {
      EquisatConfig c = batch(k);
      c.n_min *= 2;
      c.n_max *= 2;
      c.verify = false;
      auto big = check_equisat(step, c);
      const auto& small = at_n.at({step, k});
      deltas << " " << step << "/" << k << ":" << small.max_delta << "," << big.max_delta;
      if (big.max_delta != small.max_delta || big.errors) bad.push_back(step + " k=" + std::to_string(k));
    }
  }
  long lv_excess = LONG_MIN, deg_excess = LONG_MIN;
  for (int k : {2, 3}) {
    const auto& r = at_n.at({"lv_reduce_3sat", k});
    lv_excess = std::max(lv_excess, r.max_lv_excess);
    deg_excess = std::max(deg_excess, r.max_degree_excess);
  }
  if (lv_excess > 0) bad.push_back("lv variable bound");
  if (deg_excess > 0) bad.push_back("lv degree bound");
  std::ostringstream d;
  d << "max delta at n,2n:" << deltas.str() << "; lv max |V'|-bound " << lv_excess << ", max degree-3L "
    << deg_excess;
  for (const auto& b : bad) d << "; violation " << b;
  report(5, "CV/LV accounting", bad.empty(), d.str(), seconds_since(t0));
}

void solver_check() {
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool ok = true;
  for (int k : {2, 3, 5}) {
    SolverCheckConfig c;
    c.k = k;
    c.count = 1000;
    c.n_max = 12;
    auto r = check_solvers(c);
    d << "k=" << k << ": rd " << r.rd_disagreements << ", generic " << r.generic_disagreements << " disagreements, "
      << r.undecided << " undecided, " << r.sat_inputs << " sat; ";
    ok &= r.total == 1000 && r.rd_disagreements == 0 && r.generic_disagreements == 0 && r.undecided == 0;
    if (!r.failures.empty()) d << "first failure " << r.failures.front().substr(0, 80) << "; ";
  }
  report(6, "solver agreement", ok, d.str(), seconds_since(t0));
}

void scaling_check() {
  auto t0 = std::chrono::steady_clock::now();
  BenchConfig c;
  c.ks = {5, 6};
  c.ns = {10, 12, 14, 16, 18, 20, 22, 24};
  c.seeds = {1, 2, 3};
  auto r = bench_scaling(c);
  const ExponentFit& f5 = r.fits[0];
  const ExponentFit& f6 = r.fits[1];
  const double target = 0.5 * std::log2(3.0);
  int censored = 0;
  bool bounded = true;
  for (const auto& row : r.rows) {
    censored += row.censored;
    if (row.k == 5 && !row.censored && row.nodes > f5.C * std::pow(3.0, row.n / 2.0) * (1 + 1e-9)) bounded = false;
  }
  const bool ok = f5.valid && f6.valid && censored == 0 && bounded && f5.slope_bits <= target + 0.05 &&
                  f6.slope_bits < f5.slope_bits - 0.02;
  std::ostringstream d;
  d.precision(4);
  d << "k=5 slope " << f5.slope_bits << " bits (bound " << target << "+0.05), C=" << f5.C << "; k=6 slope "
    << f6.slope_bits << " bits (needs < " << f5.slope_bits - 0.02 << "); censored " << censored;
  report(7, "scaling", ok, d.str(), seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto want = [&](int id) { return only.empty() || only.count(id); };
  if (want(1)) fixtures_check();
  if (want(2)) galois_check();
  if (want(3)) saturation_check();
  if (want(4) || want(5)) {
    auto reps = soundness_check();
    if (want(5)) accounting_check(reps);
  }
  if (want(6)) solver_check();
  if (want(7)) scaling_check();
  return failures == 0 ? 0 : 1;
}
