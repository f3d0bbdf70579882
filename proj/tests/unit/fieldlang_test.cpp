#include <gtest/gtest.h>

#include "latgeo/errors.hpp"
#include "latgeo/fieldlang.hpp"
#include "latgeo/sampling.hpp"

using namespace latgeo;

namespace {
bool holds(const char* text, FieldKind kind, const FormConstants& a, std::vector<Scalar> vals) {
  return eval_field_formula(parse_field_formula(text, kind), vals, make_context(kind, a));
}
}  // namespace

TEST(FieldEval, Examples) {
  EXPECT_TRUE(holds("x1*x1* - 1 = 0", FieldKind::Gaussian, FormConstants::ones(1), {Scalar(0, 1)}));
  EXPECT_TRUE(holds("c2*x1 = 0", FieldKind::Rational, FormConstants::parse("1,2"), {Scalar(0)}));
  const FormConstants one = FormConstants::ones(1);
  EXPECT_TRUE(holds("x1* - 2 = 0", FieldKind::Gaussian, one, {Scalar(2)}));
  EXPECT_TRUE(holds("x1*-2 + 4 = 0", FieldKind::Gaussian, one, {Scalar(2)}));
  EXPECT_TRUE(holds("x1* - x1 = 0", FieldKind::Gaussian, one, {Scalar(3)}));
  EXPECT_FALSE(holds("x1* - x1 = 0", FieldKind::Gaussian, one, {Scalar(3, 1)}));
  Sampler s(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(holds("x1*x1 - 2 = 0", FieldKind::Rational, FormConstants::ones(1), {s.rational_scalar()}));
  }
}

TEST(FieldEval, QuantifierNeedsWitnesses) {
  const Formula f = parse_field_formula("E x2 . x1 - x2 = 0", FieldKind::Rational);
  EXPECT_THROW(eval_field_formula(f, {Scalar(1)}, make_context(FieldKind::Rational, FormConstants::ones(1))),
               UsageError);
  FieldContext ctx = make_context(FieldKind::Rational, FormConstants::ones(1));
  ctx.witnesses = [](const FNode&, const std::vector<Scalar>& env) {
    return std::vector<std::vector<Scalar>>{{env[0]}};
  };
  EXPECT_TRUE(eval_field_formula(f, {Scalar(1)}, ctx));
}

TEST(FieldParse, RoundTripThroughTextAndJson) {
  for (const char* t : {"x1 = 0", "x1*x2 - 1 = 0 && x3 != 0", "x1* + c2*x2 = 3 || !(x1 = x2)",
                        "E x3 . x1*x3 - 1 = 0", "true", "false"}) {
    const Formula f = parse_field_formula(t, FieldKind::Gaussian);
    EXPECT_EQ(to_text(parse_field_formula(to_text(f), FieldKind::Gaussian)), to_text(f)) << t;
    EXPECT_EQ(to_text(formula_from_json(to_json(f))), to_text(f)) << t;
  }
  EXPECT_THROW(parse_field_formula("x1 + = 0", FieldKind::Rational), ParseError);
}

TEST(DisjointBasic, Examples) {
  const Expr p = Expr::var(0), q = Expr::var(1);
  auto one = to_disjoint_basic(Formula::eq0(p));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].zeros.size(), 1u);
  auto neg = to_disjoint_basic(Formula::neq0(p));
  ASSERT_EQ(neg.size(), 1u);
  EXPECT_EQ(neg[0].nonzeros.size(), 1u);
  auto two = to_disjoint_basic(Formula::eq0(p) || Formula::eq0(q));
  EXPECT_EQ(two.size(), 2u);
}

TEST(DisjointBasic, DisjointCoverOnTruthTable) {
  const Formula f = parse_field_formula("(x1 = 0 || x2 = 0) && !(x1 = 0 && x3 = 0) || x3 - x2 = 0", FieldKind::Rational);
  const auto parts = to_disjoint_basic(f);
  const FieldContext ctx = make_context(FieldKind::Rational, FormConstants::ones(1));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 3; ++c) {
        const std::vector<Scalar> v{a, b, c};
        int hits = 0;
        for (const auto& bf : parts) hits += eval_field_formula(bf.to_formula(), v, ctx);
        EXPECT_LE(hits, 1);
        EXPECT_EQ(hits == 1, eval_field_formula(f, v, ctx));
      }
    }
  }
}

TEST(ClearConstants, ClearsDenominators) {
  const FormConstants a = FormConstants::parse("1,3/2");
  const Formula f = parse_field_formula("c2*x1 - 1 = 0", FieldKind::Rational);
  const Formula g = clear_constants(f, a);
  EXPECT_EQ(to_text(g), to_text(parse_field_formula("3*x1 - 2 = 0", FieldKind::Rational)));
  const FieldContext ctx = make_context(FieldKind::Rational, a);
  Sampler s(2);
  for (int i = 0; i < 100; ++i) {
    const std::vector<Scalar> v{i % 10 == 0 ? Scalar(Rational(2, 3)) : s.rational_scalar()};
    EXPECT_EQ(eval_field_formula(f, v, ctx), eval_field_formula(g, v, ctx));
  }
  const Formula plain = parse_field_formula("x1*x2 - 4 = 0", FieldKind::Rational);
  EXPECT_EQ(to_text(clear_constants(plain, a)), to_text(plain));
  EXPECT_EQ(to_text(clear_constants(parse_field_formula("c2*x1 = 0", FieldKind::Rational), FormConstants::parse("1,5"))),
            to_text(parse_field_formula("5*x1 = 0", FieldKind::Rational)));
}

TEST(Stats, CountsAtomsAndDegree) {
  const FormulaStats st = stats(parse_field_formula("x1*x2*x2 = 0 && x1 != 0 && x1 = 0", FieldKind::Rational));
  EXPECT_EQ(st.atoms, 2u);
  EXPECT_EQ(st.literals, 3u);
  EXPECT_EQ(st.max_degree, 3);
  EXPECT_EQ(max_variable(parse_field_formula("E x7 . x1 - x7 = 0", FieldKind::Rational)), 6);
}

TEST(Expr, HashConsingAndExpansion) {
  const Expr x = Expr::var(0), y = Expr::var(1);
  EXPECT_EQ(x + y, y + x);
  EXPECT_EQ(poly::expand((x + y) * (x - y), FieldKind::Rational), poly::expand(x * x - y * y, FieldKind::Rational));
  EXPECT_TRUE((x - x).is_zero());
}
