#include <gtest/gtest.h>

#include <cctype>
#include <string>

#include "latgeo/errors.hpp"
#include "latgeo/frames.hpp"
#include "latgeo/sampling.hpp"

using namespace latgeo;
using namespace latgeo::frames;

namespace {

Subspace line_of(const std::vector<Scalar>& v) {
  return Subspace::span(Matrix::from_columns(static_cast<int>(v.size()), {v}));
}

Subspace eval_on(const LatticeTerm& t, const Frame& f, const std::vector<Subspace>& pts) {
  return eval_term(t, frame_assignment(f, pts), LatticeSpace::make(f.d, f.kind, f.alpha));
}

Frame diagonal_frame(const std::vector<long>& scale, const FormConstants& a, FieldKind kind) {
  const int d = static_cast<int>(scale.size());
  Matrix v(d, d);
  for (int i = 0; i < d; ++i) v(i, i) = Scalar(scale[i]);
  return frame_of_basis(v, a, kind);
}

}  // namespace

TEST(Frame, CanonicalBasis) {
  const Frame f = frame_from_basis(identity(3), FormConstants::ones(3), FieldKind::Rational);
  EXPECT_EQ(f.at(0, 0), line_of({1, 0, 0}));
  EXPECT_EQ(f.at(2, 2), line_of({0, 0, 1}));
  EXPECT_EQ(f.at(0, 1), line_of({-1, 1, 0}));
  EXPECT_EQ(f.at(1, 2), line_of({0, -1, 1}));
  EXPECT_TRUE(frame_axioms_hold(f));
  EXPECT_TRUE(is_alpha_frame(f));
  EXPECT_THROW(FormConstants::parse("4,4,4"), UsageError);
}

TEST(Frame, AlphaFrameChecks) {
  const FormConstants a = FormConstants::parse("1,2,3");
  EXPECT_TRUE(is_alpha_frame(frame_of_basis(identity(3), a, FieldKind::Rational)));
  EXPECT_TRUE(is_alpha_frame(diagonal_frame({2, -2, 2}, a, FieldKind::Rational)));
  EXPECT_FALSE(is_alpha_frame(diagonal_frame({1, 2, 1}, a, FieldKind::Rational)));
  Matrix skew = identity(3);
  skew(0, 1) = Scalar(1);
  const Frame s = frame_of_basis(skew, a, FieldKind::Rational);
  EXPECT_TRUE(frame_axioms_hold(s));
  EXPECT_FALSE(is_alpha_frame(s));
  EXPECT_THROW(frame_from_basis(skew, a, FieldKind::Rational), UsageError);
}

TEST(Frame, BasisRecoveredUpToScalar) {
  Sampler s(11);
  const FormConstants a = FormConstants::ones(4);
  for (int i = 0; i < 50; ++i) {
    const Matrix v = s.invertible(4);
    const Frame f = frame_of_basis(v, a, FieldKind::Rational);
    const auto w = frame_basis(f);
    ASSERT_TRUE(w.has_value());
    const Frame g = frame_of_basis(*w, a, FieldKind::Rational);
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < 4; ++q) EXPECT_EQ(f.at(p, q), g.at(p, q));
    }
  }
}

TEST(Ring, EncodeDecode) {
  const Frame f = frame_from_basis(identity(3), FormConstants::ones(3), FieldKind::Gaussian);
  EXPECT_EQ(ring_encode(Scalar(0), f), f.at(0, 0));
  EXPECT_EQ(ring_encode(Scalar(-1), f), line_of({1, 1, 0}));
  Sampler s(12, FieldKind::Gaussian);
  for (int i = 0; i < 100; ++i) {
    const Scalar r = s.rational_scalar();
    const Subspace u = ring_encode(r, f);
    EXPECT_TRUE(in_ring(u, f));
    EXPECT_EQ(ring_decode(u, f), r);
  }
  EXPECT_FALSE(in_ring(f.at(1, 1), f));
  EXPECT_THROW(ring_decode(f.at(1, 1), f), UsageError);
}

TEST(Ring, OperationsOnExamples) {
  const Frame f = frame_from_basis(identity(3), FormConstants::ones(3), FieldKind::Gaussian);
  const RingOps ops = ring_term_ops(f);
  auto w = [&](const Scalar& r) { return ring_encode(r, f); };
  EXPECT_EQ(eval_on(ops.add, f, {w(Scalar(1)), w(Scalar(1))}), w(Scalar(2)));
  EXPECT_EQ(eval_on(ops.mult, f, {w(Scalar(Rational(3, 2))), w(Scalar(0))}), w(Scalar(0)));
  EXPECT_EQ(eval_on(ops.star, f, {w(Scalar(1, 2))}), w(Scalar(1, -2)));
  EXPECT_EQ(eval_on(ops.negate, f, {w(Scalar(5))}), w(Scalar(-5)));
}

class RingProperty : public ::testing::TestWithParam<std::tuple<FieldKind, const char*>> {};

TEST_P(RingProperty, MatchesFieldArithmetic) {
  const auto [kind, alpha_text] = GetParam();
  const FormConstants a = FormConstants::parse(alpha_text);
  Sampler s(13, kind);
  Matrix v(3, 3);
  const std::vector<long> scale{3, -3, 3};
  for (int i = 0; i < 3; ++i) v(i, i) = Scalar(scale[i]);
  const Frame f = frame_from_basis(v, a, kind);
  const RingOps ops = ring_term_ops(f);
  const RingTerms rt(3, a);
  for (int i = 0; i < 40; ++i) {
    const Scalar r = s.rational_scalar(), q = s.rational_scalar();
    const std::vector<Subspace> pts{ring_encode(r, f), ring_encode(q, f)};
    EXPECT_EQ(ring_decode(eval_on(ops.add, f, pts), f), r + q);
    EXPECT_EQ(ring_decode(eval_on(ops.mult, f, pts), f), r * q);
    EXPECT_EQ(ring_decode(eval_on(ops.negate, f, pts), f), -r);
    EXPECT_EQ(ring_decode(eval_on(ops.star, f, pts), f), r.conj());
    if (!r.is_zero()) EXPECT_EQ(ring_decode(eval_on(rt.swap(ops.x), f, pts), f), Scalar(1) / r);
  }
  for (const Rational q : {Rational(0), Rational(7), Rational(-3, 4), Rational(5, 6)}) {
    EXPECT_EQ(ring_decode(eval_on(rt.constant(q), f, {}), f), Scalar(q));
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, RingProperty,
                         ::testing::Values(std::make_tuple(FieldKind::Rational, "1,1,1"),
                                           std::make_tuple(FieldKind::Rational, "1,3/2,-2"),
                                           std::make_tuple(FieldKind::Gaussian, "1,2,1"),
                                           std::make_tuple(FieldKind::Gaussian, "1,3/2,-2")),
                         [](const auto& info) {
                           std::string name = std::get<0>(info.param) == FieldKind::Rational ? "rat" : "gauss";
                           for (const char ch : std::string(std::get<1>(info.param))) {
                             name += std::isdigit(static_cast<unsigned char>(ch)) ? ch : '_';
                           }
                           return name;
                         });

TEST(Encoder, SinglePointIsZero) {
  const FormConstants a = FormConstants::ones(3);
  const auto enc = encode_field_formula(parse_field_formula("x1 = 0", FieldKind::Rational), 1, 3, a);
  EXPECT_EQ(enc.names.front(), "z11");
  EXPECT_EQ(enc.names.back(), "x1");
  EXPECT_EQ(static_cast<int>(enc.names.size()), num_frame_vars(3) + 1);
  const Frame f = frame_from_basis(identity(3), a, FieldKind::Rational);
  EXPECT_TRUE(eval_encoding(enc, f, {ring_encode(Scalar(0), f)}));
  EXPECT_FALSE(eval_encoding(enc, f, {ring_encode(Scalar(2), f)}));
  EXPECT_FALSE(eval_encoding(enc, f, {f.at(1, 1)}));
  EXPECT_FALSE(eval_encoding(enc, diagonal_frame({1, 2, 1}, a, FieldKind::Rational), {f.at(0, 0)}));
}

TEST(Encoder, ConjunctionAgreesWithField) {
  const FormConstants a = FormConstants::parse("1,2,-1");
  const Formula phi = parse_field_formula("x1*x2 - 1 = 0 && x1 + 1 != 0", FieldKind::Rational);
  const auto enc = encode_field_formula(phi, 2, 3, a);
  const Frame f = frame_from_basis(identity(3), a, FieldKind::Rational);
  Sampler s(14);
  int truths = 0;
  for (int i = 0; i < 30; ++i) {
    Scalar r = s.nonzero_scalar();
    const Scalar q = i % 2 ? Scalar(1) / r : s.rational_scalar();
    const bool want = eval_field_formula(phi, {r, q}, make_context(FieldKind::Rational, a));
    truths += want;
    EXPECT_EQ(eval_encoding(enc, f, {ring_encode(r, f), ring_encode(q, f)}), want);
  }
  EXPECT_GT(truths, 0);
}

TEST(Encoder, RejectsUnsupportedShapes) {
  const FormConstants a = FormConstants::ones(3);
  const Formula disj = parse_field_formula("x1 = 0 || x1 = 1", FieldKind::Rational);
  EXPECT_THROW(encode_field_formula(disj, 1, 3, a), UsageError);
  EXPECT_THROW(encode_field_formula(parse_field_formula("x1 = 0", FieldKind::Rational), 1, 3, a, EncodeMode::Dnf),
               NotImplementedError);
  EXPECT_THROW(RingTerms(2, FormConstants::ones(2)), UsageError);
}

TEST(Encoder, HomogeneousTranslationExceedsCap) {
  const FormConstants a = FormConstants::ones(3);
  const auto enc = encode_field_formula(parse_field_formula("x1 = 0", FieldKind::Rational), 1, 3, a);
  EXPECT_THROW(encode_homogeneous(enc, a, FieldKind::Rational), CapacityError);
}
