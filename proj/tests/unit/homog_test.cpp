#include <gtest/gtest.h>

#include "latgeo/errors.hpp"
#include "latgeo/homog.hpp"
#include "latgeo/sampling.hpp"
#include "support/support.hpp"

using namespace latgeo;
using namespace latgeo::homog;
using plucker::PluckerVector;

namespace {

PluckerVector axis(int d, std::vector<int> idx) {
  Matrix m(d, static_cast<int>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) m(idx[j], static_cast<int>(j)) = Scalar(1);
  return plucker::plucker_of(m, static_cast<int>(idx.size()));
}

bool holds(const HomogeneousFormula& h, const std::vector<PluckerVector>& p, const FormConstants& a) {
  return eval_field_formula(h.formula, plucker::flatten(h.free, p), make_context(FieldKind::Rational, a));
}

}  // namespace

TEST(Eta, Examples) {
  const auto h = build_eta(3, 1, 1);
  const FormConstants a = FormConstants::ones(3);
  EXPECT_TRUE(holds(h, {axis(3, {0}), plucker::scaled(axis(3, {0}), Scalar(-2))}, a));
  EXPECT_FALSE(holds(h, {axis(3, {0}), axis(3, {1})}, a));
}

TEST(Eta, OracleAndCertificate) {
  const FormConstants a = FormConstants::ones(3);
  Sampler s(1);
  for (int i = 0; i < 500; ++i) {
    const int k = s.uniform(0, 3);
    const auto h = build_eta(3, k, k);
    const PluckerVector r0 = fixtures::random_point(s, 3, k);
    const PluckerVector r1 = i % 3 == 0 ? plucker::scaled(r0, s.nonzero_scalar()) : fixtures::random_point(s, 3, k);
    EXPECT_EQ(holds(h, {r0, r1}, a), plucker::theta_point(r0) == plucker::theta_point(r1));
  }
}

TEST(Sigma, Examples) {
  const auto h = build_sigma(3, 2, 1, 1);
  const FormConstants a = FormConstants::ones(3);
  EXPECT_TRUE(holds(h, {axis(3, {0, 1}), axis(3, {0}), axis(3, {1})}, a));
  EXPECT_FALSE(holds(h, {axis(3, {0, 1}), axis(3, {0}), axis(3, {0})}, a));
}

TEST(Kappa, Examples) {
  const FormConstants a = FormConstants::ones(2);
  const auto h = build_kappa(2, 1, 1, a, FieldKind::Rational);
  EXPECT_TRUE(holds(h, {axis(2, {0}), axis(2, {1})}, a));
  EXPECT_FALSE(holds(h, {axis(2, {0}), axis(2, {0})}, a));
}

TEST(Kappa, OracleWithNonUnitForm) {
  const FormConstants a = FormConstants::parse("1,2,1");
  Sampler s(2);
  for (int i = 0; i < 500; ++i) {
    const int d1 = s.uniform(0, 3), d0 = 3 - d1;
    const auto h = build_kappa(3, d0, d1, a, FieldKind::Rational);
    const PluckerVector r1 = fixtures::random_point(s, 3, d1);
    const Subspace p = perp(FieldKind::Rational, plucker::theta_point(r1), a);
    const PluckerVector r0 = i % 2 == 0 && d0 > 0 ? plucker::plucker_of(p.basis(), d0) : fixtures::random_point(s, 3, d0);
    EXPECT_EQ(holds(h, {r0, r1}, a), plucker::theta_point(r0) == p);
  }
}

TEST(Certifier, Examples) {
  const VarBlock x{"x", 1, {0, 1}}, y{"y", 2, {2, 3, 4}};
  const Expr good = Expr::var(0) * Expr::var(2) - Expr::var(1) * Expr::var(3);
  const Expr bad = Expr::var(0) * Expr::var(0) - Expr::var(1);
  EXPECT_TRUE(atom_is_homogeneous(good, {x, y}, FieldKind::Rational));
  EXPECT_FALSE(atom_is_homogeneous(bad, {x, y}, FieldKind::Rational));
}

TEST(Certifier, AllBuildersAreHomogeneous) {
  for (int d = 1; d <= 4; ++d) {
    const FormConstants a = FormConstants::ones(d);
    for (int d0 = 0; d0 <= d; ++d0) {
      EXPECT_TRUE(certify_homogeneous(build_eta(d, d0, d0)));
      EXPECT_TRUE(certify_homogeneous(build_kappa(d, d0, d - d0, a, FieldKind::Rational)));
      for (int d1 = 0; d1 <= d0; ++d1) {
        for (int d2 = 0; d2 <= d0; ++d2) {
          if (d0 <= d1 + d2) EXPECT_TRUE(certify_homogeneous(build_sigma(d, d0, d1, d2)));
        }
      }
    }
  }
}

TEST(AdmissibleDeltas, Examples) {
  const auto perp_sys = flatten_special(parse_lattice_formula("x1 = x2'").formula, 2);
  for (const Delta& dl : admissible_deltas(perp_sys, {1, 2}, 3)) {
    for (const auto& e : perp_sys.defs) {
      if (e.kind == SpecialKind::Perp) EXPECT_EQ(dl[e.target], 3 - dl[e.a]);
    }
  }
  const auto join_sys = flatten_special(parse_lattice_formula("x3 = x1 + x2").formula, 3);
  std::set<int> seen;
  for (const Delta& dl : admissible_deltas(join_sys, {1, 1, 1}, 3)) {
    for (const auto& e : join_sys.defs) {
      if (e.kind == SpecialKind::Join) seen.insert(dl[e.target]);
    }
  }
  EXPECT_EQ(seen, (std::set<int>{1, 2}));
}

TEST(AdmissibleDeltas, ConcreteEvaluationsAreCovered) {
  const FormConstants a = FormConstants::ones(3);
  const LatticeSpace sp = LatticeSpace::make(3, FieldKind::Rational, a);
  const auto sys = flatten_special(parse_lattice_formula("x1 + x2' = (x1 + x3)'").formula, 3);
  Sampler s(3);
  for (int i = 0; i < 300; ++i) {
    std::vector<Subspace> u{s.subspace(3), s.subspace(3), s.subspace(3)};
    const auto all = eval_system(sys, u, sp);
    Delta want;
    for (const auto& v : all) want.push_back(v.dim());
    const auto ds = admissible_deltas(sys, {u[0].dim(), u[1].dim(), u[2].dim()}, 3);
    EXPECT_NE(std::find(ds.begin(), ds.end(), want), ds.end());
  }
}

TEST(HomogTranslate, LineEqualityAndSumInstance) {
  const FormConstants a = FormConstants::ones(3);
  const LatticeSpace sp = LatticeSpace::make(3, FieldKind::Rational, a);
  Sampler s(4);
  {
    const auto t = homog_translate(parse_lattice_formula("x1 = x2"), {1, 1}, a);
    for (int i = 0; i < 300; ++i) {
      const PluckerVector p = fixtures::random_point(s, 3, 1);
      const PluckerVector q = i % 2 ? fixtures::random_point(s, 3, 1) : plucker::scaled(p, Scalar(5));
      EXPECT_EQ(eval_homog(t, {p, q}), plucker::theta_point(p) == plucker::theta_point(q));
    }
  }
  const ParsedFormula phi = parse_lattice_formula("x3 = x1 + x2 && x1 != x2");
  const auto t = homog_translate(phi, {1, 1, 2}, a);
  EXPECT_TRUE(certify_homogeneous(t.result));
  int truths = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<PluckerVector> p{fixtures::random_point(s, 3, 1), fixtures::random_point(s, 3, 1),
                                 fixtures::random_point(s, 3, 2)};
    if (i % 2 == 0) {
      const Subspace j = join(plucker::theta_point(p[0]), plucker::theta_point(p[1]));
      if (j.dim() == 2) p[2] = plucker::plucker_of(j.basis(), 2);
    }
    std::vector<Subspace> u;
    for (const auto& x : p) u.push_back(plucker::theta_point(x));
    const bool want = eval_formula(phi.formula, u, sp);
    truths += want;
    EXPECT_EQ(eval_homog(t, p), want);
  }
  EXPECT_GT(truths, 50);
}

TEST(HomogTranslate, ForallModeAndNegationOption) {
  const FormConstants a = FormConstants::ones(3);
  const LatticeSpace sp = LatticeSpace::make(3, FieldKind::Rational, a);
  const ParsedFormula phi = parse_lattice_formula("x1 != x2 || x1 = 0");
  HomogOptions opt;
  opt.mode = Quant::Forall;
  const auto t = homog_translate(phi, {1, 2}, a, opt);
  Sampler s(5);
  for (int i = 0; i < 100; ++i) {
    const std::vector<PluckerVector> p{fixtures::random_point(s, 3, 1), fixtures::random_point(s, 3, 2)};
    EXPECT_EQ(eval_homog(t, p), eval_formula(phi.formula, {plucker::theta_point(p[0]), plucker::theta_point(p[1])}, sp));
  }
  opt.literal_forall_negation = true;
  const auto literal = homog_translate(phi, {1, 2}, a, opt);
  EXPECT_FALSE(eval_homog(literal, {fixtures::random_point(s, 3, 1), fixtures::random_point(s, 3, 2)}));
}

TEST(HomogTranslate, ScalarInvariance) {
  const FormConstants a = FormConstants::parse("1,2,1");
  const auto t = homog_translate(parse_lattice_formula("x3 = x1' + x2"), {2, 1, 2}, a);
  Sampler s(6);
  for (int i = 0; i < 200; ++i) {
    std::vector<PluckerVector> p{fixtures::random_point(s, 3, 2), fixtures::random_point(s, 3, 1),
                                 fixtures::random_point(s, 3, 2)};
    std::vector<PluckerVector> q;
    for (const auto& x : p) q.push_back(plucker::scaled(x, s.nonzero_scalar()));
    EXPECT_EQ(eval_homog(t, p), eval_homog(t, q));
  }
}

TEST(HomogTranslate, RejectsUnsupportedInput) {
  const FormConstants a = FormConstants::ones(3);
  EXPECT_THROW(homog_translate(parse_lattice_formula("E y1 . x1 = y1"), {1}, a), UsageError);
  EXPECT_THROW(homog_translate(parse_lattice_formula("x1 = x2 || x1 = 0"), {1, 1}, a), UsageError);
  EXPECT_THROW(homog_translate(parse_lattice_formula("x1 & x2 = 0", LatticeMode::Plain), {1, 1}, a), UsageError);
}

TEST(OrderAtoms, Containment) {
  const FormConstants a = FormConstants::ones(3);
  const auto h = translate_order_atoms({{0, 1, false}, {0, 2, true}}, {1, 2, 1}, 3, a, FieldKind::Rational);
  EXPECT_TRUE(certify_homogeneous(h));
  Sampler s(7);
  for (int i = 0; i < 300; ++i) {
    std::vector<PluckerVector> p{fixtures::random_point(s, 3, 1), fixtures::random_point(s, 3, 2),
                                 fixtures::random_point(s, 3, 1)};
    if (i % 2 == 0) {
      const Subspace plane = plucker::theta_point(p[1]);
      p[0] = plucker::plucker_of(select_columns(plane.basis(), {0}), 1);
      p[2] = plucker::plucker_of(select_columns(perp(FieldKind::Rational, plucker::theta_point(p[0]), a).basis(), {0}), 1);
    }
    const Subspace u0 = plucker::theta_point(p[0]), u1 = plucker::theta_point(p[1]), u2 = plucker::theta_point(p[2]);
    const bool want = u0.leq(u1) && u0.leq(perp(FieldKind::Rational, u2, a));
    EXPECT_EQ(holds(h, p, a), want);
  }
}
