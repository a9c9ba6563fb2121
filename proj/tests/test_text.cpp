#include "mef/text.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mef;
using mef::testing::ring;
using mef::testing::Rng;

namespace {

const char* kCounterexample = "ring: Z x Z/2\nvars: 1\nconst c = <0, 1>\nfn f = c*g1 + c*g1^2";

TEST(Parse, Counterexample) {
  ProblemFile p = parse(kCounterexample);
  EXPECT_EQ(p.ring.to_string(), "Z x Z/2");
  EXPECT_EQ(p.arity, 1u);
  ASSERT_EQ(p.constants.size(), 1u);
  EXPECT_EQ(p.constants[0].first, "c");
  const ExpPoly& f = p.function("f");
  ASSERT_EQ(f.terms().size(), 2u);
  RingValue c = p.constants[0].second;
  EXPECT_TRUE(c.part(0).is_zero());
  EXPECT_TRUE(c.part(1) == RingElem::integer(Modulus(Integer(2)), 1));
  EXPECT_TRUE(f.coefficient(TermKey({1}, {0})).identical(c));
  EXPECT_TRUE(f.coefficient(TermKey({2}, {0})).identical(c));
}

TEST(Parse, SingleExponentialTerm) {
  ExpPoly f = parse("ring: Z\nvars: 1\nfn f = L^(-g1)").function("f");
  ASSERT_EQ(f.terms().size(), 1u);
  EXPECT_EQ(f.terms().begin()->first, TermKey({0}, {-1}));
  EXPECT_TRUE(f.terms().begin()->second == RingValue::one(integers()));
}

TEST(Parse, UnitDenominatorCancels) {
  ExpPoly f = parse("ring: Z\nvars: 1\nfn f = (L^2-1)/(L-1) * g1").function("f");
  ASSERT_EQ(f.terms().size(), 1u);
  EXPECT_TRUE(f.coefficient(TermKey({1}, {0})).identical(parse_value("L + 1", integers())));
}

TEST(Parse, ExponentForms) {
  auto r = integers();
  EXPECT_TRUE(parse_function("L^g2", r, 2).identical(ExpPoly::exponential(r, {0, 1})));
  EXPECT_TRUE(parse_function("L^(2*(g1 - g2) + 3)", r, 2)
                  .identical(ExpPoly::exponential(r, {2, -2}).scaled(l_pow(r, 3))));
  EXPECT_TRUE(parse_function("L^(g1*3)", r, 1).identical(ExpPoly::exponential(r, {3})));
  EXPECT_TRUE(parse_value("L^-2", r).identical(l_pow(r, -2)));
  EXPECT_TRUE(parse_value("L^(-2)", r).identical(l_pow(r, -2)));
  EXPECT_TRUE(parse_function("g", r, 1).identical(ExpPoly::variable(1, r, 0)));
}

TEST(Parse, Denominators) {
  auto r = integers();
  EXPECT_TRUE(parse_value("1/(L^2 - L)", r).identical(invert_l_pow_diff(r, 2, 1)));
  EXPECT_TRUE(parse_value("1/(L - L^2)", r).identical(invert_l_pow_diff(r, 1, 2)));
  EXPECT_TRUE(parse_value("1/(L*(L-1)^2*(L^3-1))", r) ==
              l_pow(r, -1) * invert_l_pow_diff(r, 1, 0) * invert_l_pow_diff(r, 1, 0) * invert_l_pow_diff(r, 3, 0));
  EXPECT_TRUE(parse_value("3/1", r).identical(RingValue::integer(r, 3)));
  EXPECT_TRUE(parse_value("1/(L^-1 - 1)", r) == invert_l_pow_diff(r, -1, 0));
  EXPECT_TRUE(parse_value("L/L^2/(L-1)", r).identical(parse_value("1/(L*(L-1))", r)));
}

TEST(Parse, ProductLiteralsUseConstantsComponentwise) {
  ProblemFile p = parse("ring: Z x Z/3\nvars: 0\nconst a = <L, 2>\nconst b = <a + 1, a*a>\nfn f = b");
  RingValue b = p.constants[1].second;
  EXPECT_TRUE(b.part(0) == RingElem(Poly(Modulus(), {1, 1}), {}));
  EXPECT_TRUE(b.part(1) == RingElem::integer(Modulus(Integer(3)), 1));
}

TEST(Parse, CommentsAndWhitespace) {
  ProblemFile p = parse("# header\nring:Z/4   vars:2\n\n fn h=2*g1*g2 # trailing\n  + L^(g1)\n");
  EXPECT_EQ(p.functions[0].second.terms().size(), 2u);
}

void expect_error(const std::string& text, int line, int col, const std::string& fragment) {
  try {
    parse(text);
    FAIL() << "accepted: " << text;
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), col) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ParseErrors, LineAndColumn) {
  expect_error("ring: Z\nvars: 1\nfn f = g1 +", 3, 12, "expected an expression");
  expect_error("ring: Z\nvars: 1\nfn f = g1 $ 2", 3, 11, "unexpected character");
  expect_error("ring: Q\nvars: 1\nfn f = 1", 1, 7, "expected 'Z'");
  expect_error("ring: Z\nvars: 1\nfn f = (g1", 3, 11, "expected ')'");
}

TEST(ParseErrors, NonUnitDenominators) {
  expect_error("ring: Z\nvars: 1\nfn f = 1/(L+1)", 3, 12, "denominators must be products");
  expect_error("ring: Z\nvars: 1\nfn f = 1/2", 3, 10, "not a unit");
  expect_error("ring: Z\nvars: 1\nfn f = 1/g1", 3, 10, "denominators must be products");
  expect_error("ring: Z\nvars: 1\nfn f = 1/(L-L)", 3, 11, "not a unit");
  expect_error("ring: Z\nvars: 1\nfn f = 1/(L^2-3)", 3, 15, "expected '1' or a power of L");
}

TEST(ParseErrors, ArityAndNames) {
  expect_error("ring: Z\nvars: 1\nfn f = g2", 3, 8, "exceeds the declared arity 1");
  expect_error("ring: Z\nvars: 2\nconst c = g1\nfn f = c", 3, 11, "not allowed");
  expect_error("ring: Z\nvars: 2\nfn f = g", 3, 8, "unknown name 'g'");
  expect_error("ring: Z\nvars: 1\nfn f = 1\nfn f = 2", 4, 4, "duplicate name");
  expect_error("ring: Z\nvars: 1\nfn f = nope", 3, 8, "unknown name");
  expect_error("ring: Z\nvars: 1\nconst L = 1\nfn f = 1", 3, 7, "reserved");
  expect_error("ring: Z\nvars: 1\nconst c = 1", 3, 12, "no function");
  expect_error("ring: Z\nvars: 1\nfn f = L^(g1*g1)", 3, 13, "linear");
  expect_error("ring: Z x Z/2\nvars: 1\nfn f = <1, 2, 3>", 3, 15, "more entries");
  expect_error("ring: Z x Z/2\nvars: 1\nfn f = <1>", 3, 8, "has 1 entries");
  expect_error("ring: Z x Z/2\nvars: 1\nfn f = <<1, 1>, 1>", 3, 9, "nested");
  expect_error("ring: Z\nvars: 1\nfn f = g1^g1", 3, 11, "non-negative integer exponent");
}

TEST(Format, Values) {
  auto r = integers();
  EXPECT_EQ(format(parse_value("L^6 + 3", r)), "L^6 + 3");
  EXPECT_EQ(format(parse_value("L/(L-1)^2", r)), "L/(L-1)^2");
  EXPECT_EQ(format(parse_value("L*(L+1)/(L-1)^3", r)), "(L^2 + L)/(L-1)^3");
  EXPECT_EQ(format(parse_value("-1/(L*(L^2-1))", r)), "-1/(L*(L^2-1))");
  EXPECT_EQ(format(parse_value("<0, 1>", ring({0, 2}))), "<0, 1>");
  EXPECT_EQ(format(RingValue::zero(r)), "0");
  EXPECT_EQ(format(parse_value("5", ring({4}))), "1");
}

TEST(Format, Functions) {
  auto r = integers();
  EXPECT_EQ(format(parse_function("L^(2*g1) + g1", r, 1)), "L^(2*g1) + g1");
  EXPECT_EQ(format(parse_function("L^(2*g1 - g2)*g1^2*g2 - 3", r, 2)), "-3 + g1^2*g2*L^(2*g1 - g2)");
  EXPECT_EQ(format(parse_function("L/(L-1)*L^(-g1) - g1", r, 1)), "(L/(L-1))*L^(-g1) - g1");
  EXPECT_EQ(format(parse_function("(L+1)*g1", r, 1)), "(L + 1)*g1");
  EXPECT_EQ(format(ExpPoly(1, r)), "0");
}

TEST(Format, FileRoundTrip) {
  ProblemFile p = parse(kCounterexample);
  std::string text = format(p);
  EXPECT_EQ(text, "ring: Z x Z/2\nvars: 1\nconst c = <0, 1>\nfn f = <0, 1>*g1 + <0, 1>*g1^2\n");
  ProblemFile q = parse(text);
  EXPECT_TRUE(q.function("f").identical(p.function("f")));
  EXPECT_EQ(format(q), text);
}

TEST(RoundTrip, RandomValues) {
  Rng rng(61);
  const std::vector<RingDesc> rings{integers(), ring({4}), ring({0, 2}), ring({3, 0, 8})};
  for (int trial = 0; trial < 200; ++trial) {
    const RingDesc& r = rings[static_cast<std::size_t>(trial) % rings.size()];
    RingValue v = mef::testing::random_value(rng, r, {5, 3, true});
    RingValue back = parse_value(format(v), r);
    EXPECT_TRUE(back.identical(v)) << format(v) << " -> " << format(back);

    std::size_t arity = static_cast<std::size_t>(mef::testing::uniform(rng, 0, 3));
    ExpPoly f = mef::testing::random_exppoly(rng, r, {arity, 5, 3, -4, 4});
    ExpPoly g = parse_function(format(f), r, arity);
    EXPECT_TRUE(g.identical(f)) << format(f) << " -> " << format(g);
  }
}

}  // namespace
