#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "galois_csp/clones.hpp"
#include "galois_csp/extensions.hpp"
#include "galois_csp/formula.hpp"
#include "oracle.hpp"

using namespace gcsp;

namespace {

PartialOperation random_op(std::mt19937_64& rng, int k, int arity, int undefined_percent) {
  PartialOperation f(k, arity);
  std::size_t points = 1;
  for (int i = 0; i < arity; ++i) points *= k;
  for (std::size_t c = 0; c < points; ++c)
    if (static_cast<int>(rng() % 100) >= undefined_percent) f.set(f.decode(c), static_cast<Value>(rng() % k));
  return f;
}

Relation random_relation(std::mt19937_64& rng, int k, int arity, int size) {
  std::vector<Tuple> ts;
  for (int i = 0; i < size; ++i) {
    Tuple t(arity);
    for (auto& v : t) v = static_cast<Value>(rng() % k);
    ts.push_back(t);
  }
  return Relation(k, arity, ts);
}

// The witness names tuples of r, maps them outside r, and preserves gamma.
void expect_sound(const Witness& w, const Relation& r, const Language& gamma) {
  EXPECT_TRUE(replay(w, r));
  EXPECT_FALSE(oracle::preserves(w.op, r));
  for (const auto& [name, g] : gamma.rels) EXPECT_TRUE(oracle::preserves(w.op, g)) << name;
  EXPECT_FALSE(r.contains(w.image));
}

}  // namespace

TEST(Clones, PreservesMinOnRb) {
  PartialOperation mn(2, 2);
  for (Value a = 0; a < 2; ++a)
    for (Value b = 0; b < 2; ++b) mn.set({a, b}, std::min(a, b));
  auto res = preserves(mn, fixtures::rneqneqneq(), "rb");
  EXPECT_FALSE(res.preserved);
  ASSERT_TRUE(res.witness);
  EXPECT_EQ(res.witness->image, (Tuple{0, 0, 0, 1, 0, 0, 0, 1}));
  EXPECT_TRUE(replay(*res.witness, fixtures::rneqneqneq()));
  EXPECT_THROW(preserves(PartialOperation(3, 2), fixtures::rneqneqneq()), std::invalid_argument);
}

TEST(Clones, PreservesMatchesOracle) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 500; ++it) {
    const int k = 2 + static_cast<int>(rng() % 2);
    Relation r = random_relation(rng, k, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 4));
    PartialOperation f = random_op(rng, k, 1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 80));
    auto res = preserves(f, r);
    EXPECT_EQ(res.preserved, oracle::preserves(f, r));
    if (!res.preserved) {
      ASSERT_TRUE(res.witness);
      EXPECT_TRUE(replay(*res.witness, r));
    }
  }
}

TEST(Clones, RestrictionKeepsPreservation) {
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int it = 0; it < 2000 && checked < 200; ++it) {
    const int k = 2 + static_cast<int>(rng() % 2);
    Relation r = random_relation(rng, k, 2, 2 + static_cast<int>(rng() % 3));
    PartialOperation f = random_op(rng, k, 2, static_cast<int>(rng() % 60));
    if (!oracle::preserves(f, r)) continue;
    ++checked;
    for (const auto& p : f.defined_points()) {
      if (rng() % 2) f.unset(p);
      EXPECT_TRUE(preserves(f, r).preserved);
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(Clones, EnumeratePolymorphismCounts) {
  Language none;
  none.k = 2;
  EXPECT_EQ(enumerate_polymorphisms(none, 1).ops.size(), 4u);
  EXPECT_EQ(enumerate_polymorphisms(none, 2).ops.size(), 16u);
  Language eq;
  eq.k = 2;
  eq.add("eq2", eq_relation(2));
  EXPECT_EQ(enumerate_polymorphisms(eq, 1).ops.size(), 4u);

  Language rb;
  rb.k = 2;
  rb.add("rb", fixtures::rneqneqneq());
  std::size_t expected = 0;
  for (Value a = 0; a < 2; ++a)
    for (Value b = 0; b < 2; ++b) {
      PartialOperation f(2, 1);
      f.set({0}, a);
      f.set({1}, b);
      expected += oracle::preserves(f, fixtures::rneqneqneq());
    }
  auto pols = enumerate_polymorphisms(rb, 1);
  EXPECT_TRUE(pols.complete);
  EXPECT_EQ(pols.ops.size(), expected);
  EXPECT_GE(expected, 1u);
  for (const auto& f : pols.ops) EXPECT_TRUE(oracle::preserves(f, fixtures::rneqneqneq()));
}

TEST(Clones, EnumerateReportsBudget) {
  Language none;
  none.k = 3;
  auto res = enumerate_polymorphisms(none, 2, 10);
  EXPECT_FALSE(res.complete);
}

TEST(Clones, ViolatingPartialOpExamples) {
  for (const Relation& r : {fixtures::rneqneqneq(), fixtures::r_ex()}) {
    Language l;
    l.k = r.domain();
    l.add("R", r);
    EXPECT_FALSE(violating_partial_op(r, l).has_value());
  }
  Language c0;
  c0.k = 2;
  c0.add("c0", constant_relation(2, 0));
  Relation one(2, 1, {{1}});
  auto w = violating_partial_op(one, c0, "one");
  ASSERT_TRUE(w);
  expect_sound(*w, one, c0);

  Language lex;
  lex.k = 3;
  lex.add("rex", fixtures::r_ex());
  EXPECT_FALSE(violating_partial_op(saturate(fixtures::r_ex()).relation, lex).has_value());

  Relation four(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  EXPECT_THROW(violating_partial_op(four, c0), std::invalid_argument);
}

TEST(Clones, WitnessesAreSound) {
  std::mt19937_64 rng(33);
  int found = 0;
  for (int it = 0; it < 300; ++it) {
    const int k = 2 + static_cast<int>(rng() % 2);
    Relation r = random_relation(rng, k, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3));
    Language l;
    l.k = k;
    l.add("g", random_relation(rng, k, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 4)));
    auto w = violating_partial_op(r, l);
    if (w) {
      ++found;
      expect_sound(*w, r, l);
    }
    EXPECT_EQ(!w.has_value(), evaluate(canonical_qfpp(r, l), l) == r);
  }
  EXPECT_GT(found, 50);
}

TEST(Clones, HigherArityViolationsContract) {
  // Pad a witness with an argument that must repeat the last one: the padded
  // operation still preserves gamma and violates r, and the search at arity
  // at most |r| reports a witness.
  std::mt19937_64 rng(34);
  int planted = 0;
  for (int it = 0; it < 300 && planted < 60; ++it) {
    Relation r = random_relation(rng, 2, 1 + static_cast<int>(rng() % 3), 2 + static_cast<int>(rng() % 2));
    Language l;
    l.k = 2;
    l.add("g", random_relation(rng, 2, 2, 1 + static_cast<int>(rng() % 3)));
    auto w = violating_partial_op(r, l);
    if (!w) continue;
    const int a = w->op.arity();
    PartialOperation big(2, a + 1);
    for (const auto& p : w->op.defined_points()) {
      Tuple q = p;
      q.push_back(p.back());
      big.set(q, *w->op.apply(p));
    }
    EXPECT_FALSE(oracle::preserves(big, r));
    for (const auto& [name, g] : l.rels) EXPECT_TRUE(oracle::preserves(big, g));
    EXPECT_LE(a, static_cast<int>(r.size()));
    ++planted;
  }
  EXPECT_GT(planted, 20);
}

TEST(Clones, PpDefinableSmallCases) {
  Language rb;
  rb.k = 2;
  rb.add("rb", fixtures::rneqneqneq());
  EXPECT_EQ(pp_definable(fixtures::rneqneq(), rb), Tri::yes);
  EXPECT_EQ(pp_definable(eq_relation(2), rb), Tri::yes);
  Language c0;
  c0.k = 2;
  c0.add("c0", constant_relation(2, 0));
  EXPECT_EQ(pp_definable(Relation(2, 1, {{1}}), c0), Tri::no);
}

TEST(Clones, WitnessTextRoundTrip) {
  Language c0;
  c0.k = 2;
  c0.add("c0", constant_relation(2, 0));
  auto w = violating_partial_op(Relation(2, 1, {{1}}), c0, "one");
  ASSERT_TRUE(w);
  std::ostringstream os;
  write_witness(os, *w);
  std::istringstream is(os.str());
  Witness back = read_witness(is, 2);
  EXPECT_EQ(back.op, w->op);
  EXPECT_EQ(back.image, w->image);
  EXPECT_EQ(back.relation, "one");
}
