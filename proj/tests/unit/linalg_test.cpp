#include <gtest/gtest.h>

#include "latgeo/lattice.hpp"
#include "latgeo/matrix.hpp"
#include "latgeo/sampling.hpp"

using namespace latgeo;

namespace {
Matrix cols(int d, std::vector<std::vector<long>> c) {
  std::vector<std::vector<Scalar>> s;
  for (auto& v : c) s.emplace_back(v.begin(), v.end());
  return Matrix::from_columns(d, s);
}
}  // namespace

TEST(ColumnNf, IdentityIsFixed) {
  const NormalForm n = column_nf(identity(3));
  EXPECT_EQ(n.N, identity(3));
  EXPECT_EQ(n.f, (PivotMap{0, 1, 2}));
}

TEST(ColumnNf, ScalesColumnsAndPads) {
  const NormalForm n = column_nf(cols(3, {{2, 0, 0}, {0, 0, 4}}));
  EXPECT_EQ(n.N, cols(3, {{1, 0, 0}, {0, 0, 1}, {0, 0, 0}}));
  EXPECT_EQ(n.f, (PivotMap{0, 2}));
}

TEST(ColumnNf, InvariantUnderRightMultiplication) {
  Sampler s(3);
  for (int i = 0; i < 1000; ++i) {
    const Matrix a = s.random_rank_matrix(3, 3);
    const NormalForm n = column_nf(a);
    const NormalForm m = column_nf(a * s.invertible(3));
    EXPECT_EQ(n.N, m.N);
    EXPECT_EQ(n.f, m.f);
  }
}

TEST(DivisionFree, IdentityHasUnitPivot) {
  const WeakNormalForm w = column_wnf_division_free(identity(3));
  EXPECT_EQ(w.W, identity(3));
  EXPECT_TRUE(w.r.is_one());
}

TEST(DivisionFree, SingleColumn) {
  const WeakNormalForm w = column_wnf_division_free(cols(3, {{0, 3, 0}}));
  EXPECT_EQ(w.f, (PivotMap{1}));
  EXPECT_EQ(w.r, Scalar(3));
  EXPECT_EQ(resize_columns(w.W, 1), cols(3, {{0, 3, 0}}));
}

TEST(DivisionFree, NeverInvertsAndAgreesWithNf) {
  Sampler s(4, FieldKind::Gaussian);
  for (int i = 0; i < 1000; ++i) {
    const Matrix a = s.random_rank_matrix(3, 3);
    InversionCounter::reset();
    const WeakNormalForm w = column_wnf_division_free(a);
    EXPECT_EQ(InversionCounter::count(), 0u);
    EXPECT_TRUE(is_wnf(w.W, w.f));
    EXPECT_EQ(column_nf(w.W).N, column_nf(a).N);
  }
}

TEST(Minor, Values) {
  EXPECT_EQ(minor(identity(3), {0, 1}, {0, 1}), Scalar(1));
  const Matrix m = Matrix::from_rows({{2, 3}, {5, 7}});
  EXPECT_EQ(minor(m, {0, 1}, {0, 1}), Scalar(2 * 7 - 3 * 5));
  EXPECT_EQ(determinant(Matrix(3, 3, Scalar(1))), Scalar(0));
}

TEST(Dagger, Examples) {
  const FormConstants a3 = FormConstants::parse("1,2,1");
  EXPECT_EQ(dagger(FieldKind::Rational, identity(3), a3), identity(3));
  const Matrix m = Matrix::from_rows({{1, 2, 0}, {3, 4, 5}, {0, 6, 7}});
  EXPECT_EQ(dagger(FieldKind::Rational, m, FormConstants::ones(3)), transpose(m));
  Matrix e12(3, 3);
  e12(0, 1) = Scalar(1);
  Matrix want(3, 3);
  want(1, 0) = Scalar(Rational(1, 2));
  EXPECT_EQ(dagger(FieldKind::Rational, e12, a3), want);
}

TEST(Dagger, IsTheAdjoint) {
  const FormConstants a = FormConstants::parse("1,2,3");
  Sampler s(9, FieldKind::Gaussian);
  for (int i = 0; i < 100; ++i) {
    const Matrix m = s.matrix(3, 3);
    const Matrix md = dagger(FieldKind::Gaussian, m, a);
    const Matrix u = s.matrix(3, 1), w = s.matrix(3, 1);
    EXPECT_EQ(a.form(FieldKind::Gaussian, (m * u).column(0), w.column(0)),
              a.form(FieldKind::Gaussian, u.column(0), (md * w).column(0)));
  }
}

TEST(OrthoComplement, Examples) {
  const FormConstants a = FormConstants::ones(3);
  Matrix e1(3, 3);
  e1(0, 0) = Scalar(1);
  EXPECT_TRUE(span_equal(ortho_complement_of_span(FieldKind::Rational, e1, a), cols(3, {{0, 1, 0}, {0, 0, 1}})));
  EXPECT_EQ(rank(ortho_complement_of_span(FieldKind::Rational, Matrix(3, 3), a)), 3);
}

TEST(OrthoComplement, GramOrthogonalAndComplementary) {
  const FormConstants a = FormConstants::parse("1,2,3");
  for (FieldKind kind : {FieldKind::Rational, FieldKind::Gaussian}) {
    Sampler s(5, kind);
    for (int i = 0; i < 500; ++i) {
      const int k = s.uniform(0, 3);
      PivotMap f;
      {
        auto all = pivot_maps(3, k);
        f = all[static_cast<std::size_t>(s.uniform(0, static_cast<int>(all.size()) - 1))];
      }
      const Matrix w = s.wnf_matrix(3, f, s.nonzero_scalar());
      const Matrix q = ortho_complement(kind, w, f, a);
      EXPECT_EQ(rank(q), 3 - k);
      for (int x = 0; x < k; ++x) {
        for (int y = 0; y < q.cols(); ++y) EXPECT_TRUE(a.form(kind, w.column(x), q.column(y)).is_zero());
      }
    }
  }
}

TEST(Zassenhaus, Examples) {
  const Matrix a = cols(3, {{1, 0, 0}, {0, 1, 0}}), b = cols(3, {{0, 1, 0}, {0, 0, 1}});
  EXPECT_TRUE(span_equal(zassenhaus_meet(a, b), cols(3, {{0, 1, 0}})));
  EXPECT_TRUE(span_equal(zassenhaus_meet(a, a), a));
}

TEST(Zassenhaus, AgreesWithComplementMeet) {
  const FormConstants a = FormConstants::ones(4);
  Sampler s(6);
  for (int i = 0; i < 500; ++i) {
    const Matrix x = s.random_rank_matrix(4, 4), y = s.random_rank_matrix(4, 4);
    const Subspace viaperp =
        perp(FieldKind::Rational,
             join(perp(FieldKind::Rational, Subspace::span(x), a), perp(FieldKind::Rational, Subspace::span(y), a)), a);
    EXPECT_EQ(Subspace::span(zassenhaus_meet(x, y)), viaperp);
  }
}

TEST(Subspace, DoubleComplement) {
  const FormConstants a = FormConstants::parse("1,2,3");
  Sampler s(8, FieldKind::Gaussian);
  for (int i = 0; i < 300; ++i) {
    const Subspace u = s.subspace(3);
    EXPECT_EQ(perp(FieldKind::Gaussian, perp(FieldKind::Gaussian, u, a), a), u);
  }
}
