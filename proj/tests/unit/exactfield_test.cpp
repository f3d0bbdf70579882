#include <gtest/gtest.h>

#include "latgeo/errors.hpp"
#include "latgeo/sampling.hpp"
#include "latgeo/scalar.hpp"

using namespace latgeo;

TEST(Involution, FixesRationals) {
  EXPECT_EQ(involution(FieldKind::Rational, Scalar(Rational(3, 2))), Scalar(Rational(3, 2)));
  EXPECT_EQ(involution(FieldKind::Gaussian, Scalar(Rational(3, 2))), Scalar(Rational(3, 2)));
}

TEST(Involution, ConjugatesGaussian) {
  EXPECT_EQ(involution(FieldKind::Gaussian, Scalar(1, 2)), Scalar(1, -2));
  EXPECT_EQ(involution(FieldKind::Gaussian, Scalar(0)), Scalar(0));
}

TEST(Involution, IsAnAutomorphismOfOrderTwo) {
  Sampler s(1, FieldKind::Gaussian);
  for (int i = 0; i < 200; ++i) {
    const Scalar a = s.rational_scalar(), b = s.rational_scalar();
    const auto inv = [](const Scalar& x) { return involution(FieldKind::Gaussian, x); };
    EXPECT_EQ(inv(inv(a)), a);
    EXPECT_EQ(inv(a + b), inv(a) + inv(b));
    EXPECT_EQ(inv(a * b), inv(a) * inv(b));
  }
}

TEST(SafeInverse, ZeroMapsToZero) { EXPECT_EQ(safe_inverse(Scalar(0)), Scalar(0)); }

TEST(SafeInverse, Values) {
  EXPECT_EQ(safe_inverse(Scalar(2)), Scalar(Rational(1, 2)));
  const Scalar z(1, 1);
  EXPECT_EQ(safe_inverse(z), Scalar(Rational(1, 2), Rational(-1, 2)));
  EXPECT_TRUE((z * safe_inverse(z)).is_one());
}

TEST(Scalar, ParseAndPrintRoundTrip) {
  for (const char* t : {"0", "7", "-3/4", "1/2+3/5 i", "-2 i", "i", "5-i"}) {
    const Scalar a = Scalar::parse(t);
    EXPECT_EQ(Scalar::parse(a.to_string()), a) << t;
  }
  EXPECT_EQ(Scalar(Rational(6, 3)).to_string(), "2");
  EXPECT_THROW(Scalar::parse("1/0"), ParseError);
  EXPECT_THROW(Scalar::parse("abc"), ParseError);
}

TEST(Scalar, InverseThrowsOnZero) { EXPECT_THROW(Scalar(0).inverse(), UsageError); }

TEST(FieldContains, RationalRejectsImaginary) {
  EXPECT_TRUE(field_contains(FieldKind::Rational, Scalar(3)));
  EXPECT_FALSE(field_contains(FieldKind::Rational, Scalar(0, 1)));
  EXPECT_TRUE(field_contains(FieldKind::Gaussian, Scalar(0, 1)));
}

TEST(FormConstants, Admissibility) {
  EXPECT_NO_THROW(FormConstants::parse("1,2,3/2"));
  EXPECT_THROW(FormConstants::parse("4,4,4"), UsageError);
  EXPECT_THROW(FormConstants::parse("1,0"), UsageError);
  EXPECT_THROW(FormConstants({Scalar(1), Scalar(0, 1)}), UsageError);
  EXPECT_THROW(FormConstants::parse("1,x"), std::exception);
}

TEST(FormConstants, FormIsHermitian) {
  const FormConstants a = FormConstants::parse("1,2,3");
  Sampler s(2, FieldKind::Gaussian);
  for (int i = 0; i < 100; ++i) {
    std::vector<Scalar> u, w;
    for (int k = 0; k < 3; ++k) {
      u.push_back(s.rational_scalar());
      w.push_back(s.rational_scalar());
    }
    EXPECT_EQ(a.form(FieldKind::Gaussian, u, w), a.form(FieldKind::Gaussian, w, u).conj());
    EXPECT_TRUE(a.form(FieldKind::Gaussian, u, u).is_real());
  }
}
