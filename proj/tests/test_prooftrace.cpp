#include "mef/prooftrace.hpp"
#include "mef/text.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mef;
using mef::testing::ring;
using mef::testing::Rng;

namespace {

const RingDesc kMixed = ring({0, 2});

ExpPoly fn(const std::string& text, std::size_t arity = 1, const RingDesc& r = integers()) {
  return parse_function(text, r, arity);
}

ExpPoly counterexample() { return fn("<0, 1>*g + <0, 1>*g^2", 1, kMixed); }

// Every step re-checked here with plain ring arithmetic where the rule allows it.
void expect_all_hold(const std::vector<TraceStep>& steps) {
  for (const auto& s : steps) EXPECT_TRUE(s.holds) << s.rule << ": " << s.identity;
}

TEST(NormalizeSlopes, Examples) {
  auto n = normalize_slopes(fn("L^(-2*g)"));
  EXPECT_TRUE(n.normalized.identical(fn("1")));
  EXPECT_EQ(n.shift, std::vector<std::int64_t>{-2});

  auto m = normalize_slopes(fn("g*L^(-g) + L^(g)"));
  EXPECT_TRUE(m.normalized.identical(fn("g + L^(2*g)")));
  EXPECT_EQ(m.shift, std::vector<std::int64_t>{-1});

  auto c = normalize_slopes(fn("1"));
  EXPECT_TRUE(c.normalized.identical(fn("1")));
  EXPECT_EQ(c.shift, std::vector<std::int64_t>{0});
}

TEST(NormalizeSlopes, Recoverable) {
  Rng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    ExpPoly f = mef::testing::random_exppoly(rng, kMixed, {2, 4, 2, -3, 3});
    auto n = normalize_slopes(f);
    for (const auto& [k, c] : n.normalized.terms())
      for (auto b : k.b) EXPECT_GE(b, 0);
    ExpPoly back = n.normalized * ExpPoly::term(2, TermKey({0, 0}, n.shift), RingValue::one(kMixed));
    EXPECT_TRUE(back.identical(f));
  }
}

TEST(TopCancellation, Examples) {
  TraceStep a = check_top_cancellation(fn("L^(g) + L^(2*g)"));
  EXPECT_TRUE(a.holds);
  EXPECT_TRUE(a.output.identical(fn("(L - L^2)*L^(g)")));

  TraceStep b = check_top_cancellation(fn("L^(g)"));
  EXPECT_TRUE(b.holds);
  EXPECT_TRUE(b.output.is_zero());

  TraceStep c = check_top_cancellation(fn("2*L^(g) + L^(3*g)"));
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.output.identical(fn("2*(L - L^3)*L^(g)")));

  EXPECT_THROW(check_top_cancellation(fn("g")), usage_error);
  EXPECT_THROW(check_top_cancellation(fn("L^(g1)", 2)), usage_error);
}

TEST(TopCoefficient, Examples) {
  TraceStep a = check_top_coefficient_identity(fn("g^2*L^(g)"));
  EXPECT_TRUE(a.holds);
  EXPECT_TRUE(a.output.constant_value() == parse_value("2*L", integers()));

  TraceStep b = check_top_coefficient_identity(fn("g"));
  EXPECT_TRUE(b.holds);
  EXPECT_TRUE(b.output.constant_value() == RingValue::one(integers()));

  TraceStep c = check_top_coefficient_identity(fn("<0, 1>*g^2", 1, kMixed));
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.output.constant_value().is_zero());

  EXPECT_THROW(check_top_coefficient_identity(fn("L^(g)")), usage_error);
}

TEST(TopCoefficient, MatchesBruteForceExpansion) {
  // Expand (x+1)^a L^{b(x+1)} - L^bmax x^a L^{bx} by hand via binomials.
  Rng rng(52);
  for (auto r : {integers(), ring({4}), kMixed}) {
    for (int trial = 0; trial < 60; ++trial) {
      ExpPoly f = mef::testing::random_exppoly(rng, r, {1, 5, 4, -3, 3});
      if (f.is_zero() || lex_max_key(f).a[0] == 0) continue;
      const TermKey top = lex_max_key(f);
      const std::int64_t amax = top.a[0], bmax = top.b[0];
      RingValue brute = RingValue::zero(r);
      for (const auto& [k, c] : f.terms()) {
        if (k.b[0] != bmax || k.a[0] < amax - 1) continue;
        // coefficient of g^{amax-1} L^{bmax g} in c (g+1)^a L^{bmax (g+1)}
        brute += c.scaled(binomial(k.a[0], amax - 1)) * l_pow(r, bmax);
        if (k.a[0] == amax - 1) brute -= c * l_pow(r, bmax);
      }
      TraceStep s = check_top_coefficient_identity(f);
      EXPECT_TRUE(s.holds);
      EXPECT_TRUE(s.output.constant_value() == brute);
      EXPECT_TRUE(brute == f.coefficient(top).scaled(amax) * l_pow(r, bmax));
    }
  }
}

TEST(TorsionExtraction, Examples) {
  auto ce = trace_torsion_extraction(counterexample());
  EXPECT_TRUE(ce.success);
  ASSERT_EQ(ce.annihilators.size(), 2u);
  for (const auto& [k, n] : ce.annihilators) {
    Integer m = n;
    while (m % 2 == 0) m /= 2;
    EXPECT_EQ(m, 1);
  }
  expect_all_hold(ce.trace);

  auto zero = trace_torsion_extraction(ExpPoly(1, integers()));
  EXPECT_TRUE(zero.success);
  EXPECT_TRUE(zero.trace.empty());

  auto two = trace_torsion_extraction(fn("2*L^(g)", 1, ring({4})));
  EXPECT_TRUE(two.success);
  EXPECT_EQ(two.annihilators.at(TermKey({0}, {1})), Integer(2));

  auto bad = trace_torsion_extraction(fn("g + <0, 1>", 1, kMixed));
  EXPECT_FALSE(bad.success);
  ASSERT_TRUE(bad.non_torsion_key.has_value());
  EXPECT_EQ(bad.non_torsion_key->a, std::vector<std::int64_t>{1});
}

TEST(TorsionExtraction, AgreesWithCertificate) {
  Rng rng(53);
  for (auto r : {ring({4}), kMixed, ring({0, 6}), ring({2, 3})}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t arity = static_cast<std::size_t>(mef::testing::uniform(rng, 1, 2));
      mef::testing::PolyShape s{arity, 6, 2, -2, 2};
      s.torsion = trial % 3 != 0;
      ExpPoly f = mef::testing::random_exppoly(rng, r, s);
      auto ex = trace_torsion_extraction(f);
      auto cert = torsion_certificate(f);
      EXPECT_EQ(ex.success, cert.has_value()) << format(f);
      expect_all_hold(ex.trace);
      if (ex.success) {
        Integer n = 1;
        for (const auto& [k, a] : ex.annihilators) {
          EXPECT_TRUE(f.coefficient(k).scaled(a).is_zero());
          n = lcm(n, a);
        }
        EXPECT_EQ(n % *cert, 0);
      }
    }
  }
}

TEST(ResidueConstancy, Examples) {
  ExpPoly cg = fn("<0, 1>*g", 1, kMixed);
  TraceStep one = check_residue_constancy(cg, 2, {1});
  EXPECT_TRUE(one.holds);
  EXPECT_TRUE(one.output.identical(fn("<0, 1>", 1, kMixed)));

  TraceStep zero = check_residue_constancy(cg, 2, {0});
  EXPECT_TRUE(zero.holds);
  EXPECT_TRUE(zero.output.is_zero());

  TraceStep sq = check_residue_constancy(fn("<0, 1>*g^2", 1, kMixed), 2, {1});
  EXPECT_TRUE(sq.holds);
  EXPECT_TRUE(sq.output.identical(fn("<0, 1>", 1, kMixed)));

  EXPECT_THROW(check_residue_constancy(cg, 3, {0}), usage_error);
  EXPECT_THROW(check_residue_constancy(cg, 2, {2}), usage_error);
  EXPECT_TRUE(check_residue_constancy(counterexample(), 2).holds);
}

TEST(ResidueConstancy, HoldsOnRandomTorsionInstances) {
  Rng rng(54);
  for (auto r : {ring({4}), ring({0, 6}), ring({3})}) {
    for (int trial = 0; trial < 30; ++trial) {
      mef::testing::PolyShape s{2, 4, 3, -2, 2};
      s.torsion = true;
      ExpPoly f = mef::testing::random_exppoly(rng, r, s);
      EXPECT_TRUE(check_residue_constancy(f, *torsion_certificate(f)).holds) << format(f);
    }
  }
}

TEST(IntegrabilityIdentity, Examples) {
  TraceStep a = check_integrability_identity(fn("L^(-g)"), 2, 1);
  EXPECT_TRUE(a.holds);
  EXPECT_TRUE(a.output.identical(fn("L^-1*L^(-2*g)")));

  TraceStep b = check_integrability_identity(fn("g*L^(-g)"), 1, 3);
  EXPECT_TRUE(b.holds);
  EXPECT_TRUE(b.output.identical(fn("(g + 3)*L^-3*L^(-g)")));

  EXPECT_TRUE(check_integrability_identity(ExpPoly(1, integers()), 3, 2).holds);
  EXPECT_THROW(check_integrability_identity(fn("g1", 2), 1, 0), usage_error);
}

TEST(IntegrabilityIdentity, HoldsOnRandomInstances) {
  Rng rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    ExpPoly f = mef::testing::random_exppoly(rng, kMixed, {1, 5, 3, -3, 3});
    EXPECT_TRUE(check_integrability_identity(f, mef::testing::uniform(rng, 1, 3), mef::testing::uniform(rng, 0, 4)).holds);
  }
}

TEST(CofiniteZero, Examples) {
  auto ce = cofinite_zero(counterexample(), 0);
  ASSERT_TRUE(ce.verdict.has_value());
  EXPECT_TRUE(ce.verdict->is_zero());
  expect_all_hold(ce.trace);

  for (std::int64_t d : {0, 2, 7}) {
    auto triv = cofinite_zero(fn("g - g"), d);
    ASSERT_TRUE(triv.verdict.has_value());
    EXPECT_TRUE(triv.verdict->is_zero());
  }

  auto wrong = cofinite_zero(fn("(g-1)*(g-2)"), 3);
  ASSERT_TRUE(wrong.verdict.has_value());
  EXPECT_FALSE(wrong.verdict->is_zero());
  EXPECT_EQ(*wrong.verdict->witness, Point{0});

  EXPECT_THROW(cofinite_zero(fn("L^(g)"), 0), usage_error);
  EXPECT_THROW(cofinite_zero(fn("g1", 2), 0), usage_error);
}

TEST(CofiniteZero, AgreesWithBruteForce) {
  Rng rng(56);
  for (int m : {2, 3, 4}) {
    RingDesc r = ring({0, m});
    for (int trial = 0; trial < 40; ++trial) {
      ExpPoly f = trial % 2 ? mef::testing::random_rising_zero(rng, r)
                            : mef::testing::random_exppoly(rng, r, {1, 3, 3, 0, 0, {2, 0, false}, trial % 4 == 0});
      std::int64_t d = mef::testing::uniform(rng, 0, 5);
      auto res = cofinite_zero(f, d);
      ASSERT_TRUE(res.verdict.has_value()) << res.diagnostic;
      bool brute_zero = !mef::testing::brute_force_nonzero(f, 31).has_value();
      EXPECT_EQ(res.verdict->is_zero(), brute_zero) << format(f);
      if (!res.verdict->is_zero()) {
        EXPECT_FALSE(evaluate(f, *res.verdict->witness).is_zero());
      }
      expect_all_hold(res.trace);
    }
  }
}

}  // namespace
