#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "galois_csp/clones.hpp"
#include "galois_csp/extensions.hpp"
#include "oracle.hpp"

using namespace gcsp;

namespace {

Relation random_three_tuple(std::mt19937_64& rng, int k, int arity) {
  std::vector<Tuple> ts;
  while (ts.size() < 3) {
    Tuple t(arity);
    for (auto& v : t) v = static_cast<Value>(rng() % k);
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  return Relation(k, arity, ts);
}

// Independent check of an R^B witness against the pattern definition.
bool witness_ok(const Relation& r, const RBWitness& w) {
  const Value a = w.a, b = w.b;
  const std::vector<std::vector<Value>> want = {
      {a, a, b, b, b, a, a, b}, {a, b, a, b, a, b, a, b}, {b, a, a, a, b, b, a, b}};
  if (a == b) return false;
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 8; ++p)
      if (r[w.rows[j]][w.indices[p]] != want[j][p]) return false;
  return true;
}

}  // namespace

TEST(Extensions, DetectExamples) {
  auto w = detect_rb_extension(fixtures::rneqneqneq());
  ASSERT_TRUE(w);
  EXPECT_EQ(w->a, 0);
  EXPECT_EQ(w->b, 1);
  EXPECT_EQ(w->indices, (std::array<int, 8>{0, 1, 2, 3, 4, 5, 6, 7}));

  auto we = detect_rb_extension(fixtures::r_ex());
  ASSERT_TRUE(we);
  EXPECT_EQ(we->a, 0);
  EXPECT_EQ(we->b, 1);
  EXPECT_EQ(we->indices, (std::array<int, 8>{0, 1, 2, 3, 4, 5, 7, 8}));

  EXPECT_FALSE(detect_rb_extension(Relation(3, 1, {{0}, {1}, {2}})));
  EXPECT_FALSE(detect_rb_extension(Relation(2, 1, {{0}, {1}})));
}

TEST(Extensions, DetectRdForEveryDomain) {
  for (int k = 2; k <= 5; ++k) {
    auto w = detect_rb_extension(make_rd(k));
    ASSERT_TRUE(w) << k;
    EXPECT_TRUE(witness_ok(make_rd(k), *w));
  }
}

TEST(Extensions, DetectAgreesWithPatternSearch) {
  std::mt19937_64 rng(41);
  int hits = 0;
  for (int it = 0; it < 300; ++it) {
    const int k = 2 + static_cast<int>(rng() % 2);
    Relation r = random_three_tuple(rng, k, 6 + static_cast<int>(rng() % 6));
    auto w = detect_rb_extension(r);
    // brute force over a < b pairs, row orders and per-pattern column choice
    bool exists = false;
    std::array<int, 3> rows{0, 1, 2};
    do {
      for (int a = 0; a < k && !exists; ++a)
        for (int b = 0; b < k && !exists; ++b) {
          if (a == b) continue;
          auto pats = rb_patterns(static_cast<Value>(a), static_cast<Value>(b));
          bool all = true;
          for (const auto& p : pats) {
            bool any = false;
            for (int i = 0; i < r.arity() && !any; ++i)
              any = r[rows[0]][i] == p[0] && r[rows[1]][i] == p[1] && r[rows[2]][i] == p[2];
            all &= any;
          }
          exists = all;
        }
    } while (!exists && std::next_permutation(rows.begin(), rows.end()));
    EXPECT_EQ(w.has_value(), exists);
    if (w) {
      ++hits;
      EXPECT_TRUE(witness_ok(r, *w));
      EXPECT_TRUE(check_rb_witness(r, *w));
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(Extensions, IsSaturatedExamples) {
  auto a = is_saturated(fixtures::r_ex());
  EXPECT_FALSE(a.saturated);
  EXPECT_EQ(a.missing, (Tuple{0, 2, 0}));

  auto b = is_saturated(fixtures::r_ex_prime());
  EXPECT_FALSE(b.saturated);
  EXPECT_EQ(b.column, 6);
  EXPECT_EQ(choice_class(fixtures::r_ex_prime(), 6), 3);

  for (int k = 2; k <= 4; ++k) EXPECT_TRUE(is_saturated(make_rd(k)).saturated);
  EXPECT_THROW(is_saturated(Relation(2, 1, {{0}, {1}})), std::invalid_argument);
}

TEST(Extensions, SaturateExamples) {
  auto s = saturate(fixtures::r_ex());
  EXPECT_TRUE(equal_up_to_column_permutation(s.relation, fixtures::r_ex_saturated()));
  EXPECT_EQ(s.relation.arity(), 15);
  for (int k = 2; k <= 4; ++k) EXPECT_EQ(saturate(make_rd(k)).relation, make_rd(k));
  EXPECT_THROW(saturate(Relation(2, 1, {{0}, {1}})), std::invalid_argument);

  // map entries replay: column j equals the tau image of column i
  for (const auto& e : s.map) {
    Tuple img{s.relation[e.tau[0]][e.from], s.relation[e.tau[1]][e.from], s.relation[e.tau[2]][e.from]};
    EXPECT_EQ(column3(s.relation, e.col), img);
  }
  std::ostringstream os;
  write_saturation_map(os, s);
  EXPECT_EQ(os.str().substr(0, 4), "col ");
}

TEST(Extensions, SaturateProperties) {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 200; ++it) {
    const int k = 2 + static_cast<int>(rng() % 2);
    Relation r = random_three_tuple(rng, k, 2 + static_cast<int>(rng() % 5));
    auto s = saturate(r);
    EXPECT_TRUE(oracle::saturated(s.relation));
    EXPECT_TRUE(is_saturated(s.relation).saturated);
    EXPECT_EQ(is_saturated(r).saturated, oracle::saturated(r));
    std::vector<int> prefix(r.arity());
    for (int i = 0; i < r.arity(); ++i) prefix[i] = i;
    EXPECT_EQ(project(s.relation, prefix), r);
    EXPECT_EQ(saturate(s.relation).relation, s.relation);
    // only missing images were added, each once
    std::set<Tuple> cols;
    for (int i = 0; i < s.relation.arity(); ++i) cols.insert(column3(s.relation, i));
    for (int i = r.arity(); i < s.relation.arity(); ++i) {
      Tuple c = column3(s.relation, i);
      EXPECT_EQ(find_column(r, c), -1);
      EXPECT_EQ(find_column(s.relation, c), i);
    }
  }
}

// Random 3-tuple relation carrying the eight pattern columns for a random
// pair a != b, plus extra random columns, shuffled.
Relation random_extension(std::mt19937_64& rng, int k, int extra) {
  Value a = static_cast<Value>(rng() % k), b;
  do b = static_cast<Value>(rng() % k);
  while (b == a);
  std::vector<Tuple> cols;
  for (const auto& p : rb_patterns(a, b)) cols.push_back({p[0], p[1], p[2]});
  for (int i = 0; i < extra; ++i)
    cols.push_back({Value(rng() % k), Value(rng() % k), Value(rng() % k)});
  std::shuffle(cols.begin(), cols.end(), rng);
  return from_columns(k, 3, cols);
}

TEST(Extensions, SaturatedExtensionStaysInWeakCoClone) {
  std::mt19937_64 rng(43);
  for (int it = 0; it < 40; ++it) {
    const int k = 2 + static_cast<int>(rng() % 2);
    Relation r = random_extension(rng, k, static_cast<int>(rng() % 4));
    ASSERT_TRUE(detect_rb_extension(r));
    Language l;
    l.k = k;
    l.add("R", r);
    Relation s = saturate(r).relation;
    if (k == 2) EXPECT_EQ(s, r);
    EXPECT_FALSE(violating_partial_op(s, l).has_value()) << to_string(r);
  }
}

TEST(Extensions, SaturationOutsideExtensionsCanLeaveTheCoClone) {
  // x >= y: its saturation is R_B up to column order, which min does not
  // preserve while min preserves x >= y.
  Relation ge(2, 2, {{0, 0}, {1, 0}, {1, 1}});
  Relation s = saturate(ge).relation;
  EXPECT_TRUE(equal_up_to_column_permutation(s, make_rb()));
  Language l;
  l.k = 2;
  l.add("ge", ge);
  auto w = violating_partial_op(s, l);
  ASSERT_TRUE(w);
  EXPECT_TRUE(oracle::preserves(w->op, ge));
  EXPECT_FALSE(oracle::preserves(w->op, s));
}

TEST(Extensions, AllTaus) {
  auto t = all_taus();
  EXPECT_EQ(t.size(), 27u);
  EXPECT_EQ(t.front(), (Tau{0, 0, 0}));
  EXPECT_EQ(t.back(), (Tau{2, 2, 2}));
}
