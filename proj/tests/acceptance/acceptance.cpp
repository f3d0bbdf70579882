#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "latgeo/cli.hpp"
#include "latgeo/errors.hpp"
#include "latgeo/frames.hpp"
#include "latgeo/gauss.hpp"
#include "latgeo/homog.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/plucker.hpp"
#include "latgeo/sampling.hpp"
#include "support/support.hpp"

using namespace latgeo;
using fixtures::structured_tuple;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
  }
  std::size_t failures() const { return failures_; }
  std::size_t checks() const { return checks_; }
  const std::string& first() const { return first_; }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string first_;
};

Outcome finish(const Tally& t, const std::string& extra) {
  std::ostringstream os;
  os << t.checks() << " checks, " << t.failures() << " failures";
  if (!extra.empty()) os << "; " << extra;
  if (t.failures() > 0) os << "; first: " << t.first();
  return {t.failures() == 0, os.str()};
}

FormConstants alpha_121(int d) {
  std::vector<Scalar> a{1, 2, 1};
  a.resize(static_cast<std::size_t>(d), Scalar(1));
  return FormConstants(a);
}

// ---------------------------------------------------------------------------

Outcome equivalence() {
  Tally t;
  std::size_t truths = 0, materialized = 0, formulas = 0;
  for (int d : {2, 3}) {
    for (const FormConstants& alpha : {FormConstants::ones(d), alpha_121(d)}) {
      const auto suite = fixtures::formula_suite(100 + d, 32, LatticeMode::Involutive);
      gauss::Options opt;
      opt.d = d;
      const LatticeSpace space = LatticeSpace::make(d, FieldKind::Rational, alpha);
      const FieldContext ctx = make_context(FieldKind::Rational, alpha);
      Sampler s(7 * d + alpha[1].re().get_num().get_si());
      for (const auto& pf : suite) {
        ++formulas;
        std::optional<Formula> full;
        try {
          full = gauss::translate_formula(pf.formula, alpha, opt);
          ++materialized;
        } catch (const CapacityError&) {
        }
        for (int i = 0; i < 200; ++i) {
          const auto mats = structured_tuple(s, d, 3, alpha);
          const bool lat = eval_formula(pf.formula, theta_span(mats), space);
          truths += lat;
          const bool tr = gauss::eval_translated(pf.formula, mats, alpha, opt);
          t.check(lat == tr, "d=" + std::to_string(d) + " " + to_text(pf.formula));
          if (full) {
            t.check(eval_field_formula(*full, gauss::flatten_assignment(mats), ctx) == lat,
                    "materialized d=" + std::to_string(d) + " " + to_text(pf.formula));
          }
        }
      }
    }
  }
  return finish(t, std::to_string(formulas) + " formulas, " + std::to_string(materialized) +
                       " fully materialized, " + std::to_string(truths) + " true instances");
}

Outcome case_trees() {
  Tally t;
  std::size_t full_tables = 0, terms = 0;
  for (int d : {2, 3}) {
    const FormConstants alpha = alpha_121(d);
    const LatticeSpace space = LatticeSpace::make(d, FieldKind::Rational, alpha);
    gauss::Options opt;
    opt.d = d;
    Sampler s(40 + d);
    for (const auto& term : fixtures::term_suite(200 + d, 16, LatticeMode::Involutive)) {
      ++terms;
      std::optional<gauss::CaseTable> table;
      try {
        table = gauss::term_cases(term, opt);
        ++full_tables;
      } catch (const CapacityError&) {
      }
      const std::string name = "d=" + std::to_string(d) + " " + to_text(term);
      for (int i = 0; i < 1000; ++i) {
        const auto mats = structured_tuple(s, d, 3, alpha);
        const Subspace direct = eval_term(term, theta_span(mats), space);
        auto sound = [&](const PivotMap& f, const Matrix& value) {
          return is_wnf(value, f) && Subspace::span(value) == direct;
        };
        if (table) {
          const std::vector<Scalar> env = gauss::flatten_assignment(mats);
          poly::Evaluator ev(FieldKind::Rational, &env, &alpha.values());
          int fired = 0;
          for (const auto& b : table->branches) {
            if (!gauss::guard_holds(b.guard, ev)) continue;
            ++fired;
            t.check(sound(b.f, gauss::evaluate(b.P, ev)), "unsound branch " + name);
          }
          t.check(fired >= 1, "no guard fires " + name);
        } else {
          const auto tr = gauss::trace_term(term, mats, alpha, opt);
          const std::vector<Scalar> env = gauss::flatten_assignment(mats);
          poly::Evaluator ev(FieldKind::Rational, &env, &alpha.values());
          t.check(gauss::guard_holds(tr.branch.guard, ev), "trace guard " + name);
          t.check(sound(tr.branch.f, tr.value), "unsound trace " + name);
        }
      }
    }
  }
  return finish(t, std::to_string(terms) + " terms, " + std::to_string(full_tables) + " with full case tables");
}

Outcome normal_forms() {
  Tally t;
  Sampler s(3);
  for (int i = 0; i < 1000; ++i) {
    const int d = s.uniform(1, 4), m = s.uniform(1, 5);
    const Matrix a = s.rank_matrix(d, m, s.uniform(0, std::min(d, m)));
    const Matrix g = s.invertible(m);
    const NormalForm n1 = column_nf(a), n2 = column_nf(a * g);
    t.check(n1.N == n2.N && n1.f == n2.f, "nf uniqueness");
    InversionCounter::reset();
    const WeakNormalForm w = column_wnf_division_free(a);
    t.check(InversionCounter::count() == 0, "division-free engine inverted a scalar");
    t.check(w.f == n1.f && is_wnf(w.W, w.f), "wnf shape");
    Matrix scaled = n1.N;
    for (int r = 0; r < scaled.rows(); ++r) {
      for (int c = 0; c < scaled.cols(); ++c) scaled(r, c) *= w.r;
    }
    t.check(scaled == resize_columns(w.W, scaled.cols()), "wnf = r * nf");
  }
  for (FieldKind kind : {FieldKind::Rational, FieldKind::Gaussian}) {
    const FormConstants alpha = FormConstants::parse("1,2,3");
    Sampler g(5, kind);
    for (int i = 0; i < 500; ++i) {
      const Matrix a = g.random_rank_matrix(3, 3);
      const Matrix q = ortho_complement_of_span(kind, a, alpha);
      t.check(rank(a) + rank(q) == 3, "dimension complementarity");
      for (int x = 0; x < a.cols(); ++x) {
        for (int y = 0; y < q.cols(); ++y) t.check(alpha.form(kind, a.column(x), q.column(y)).is_zero(), "gram");
      }
      const Subspace u = Subspace::span(a);
      t.check(perp(kind, perp(kind, u, alpha), alpha) == u, "double complement");
    }
  }
  return finish(t, "");
}

Outcome plucker_suite() {
  using namespace plucker;
  Tally t;
  Sampler s(11);
  for (int d = 1; d <= 4; ++d) {
    for (int k = 1; k <= d; ++k) {
      const IndexFamily fam(d, k);
      for (int i = 0; i < 1000; ++i) {
        const Matrix a = s.rank_matrix(d, k, k);
        const PluckerVector r = plucker_of(a, k);
        const Recovery rec = recover_matrix(r);
        Scalar lambda = 1;
        for (int j = 0; j < k - 1; ++j) lambda *= r.coords[static_cast<std::size_t>(fam.position(rec.f))];
        t.check(rec.lambda == lambda, "lambda");
        t.check(plucker_of(rec.A, k) == scaled(r, lambda), "roundtrip");
        t.check(Subspace::span(rec.A) == Subspace::span(a), "recovered span");
        t.check(grassmann_membership(r), "member");
      }
    }
  }
  std::size_t equal_pairs = 0;
  for (int i = 0; i < 500; ++i) {
    const int d = s.uniform(2, 4), k = s.uniform(1, d);
    const Matrix a = s.rank_matrix(d, k, k);
    const Matrix b = i % 2 == 0 ? a * s.invertible(k) : s.rank_matrix(d, k, k);
    const bool same = Subspace::span(a) == Subspace::span(b);
    equal_pairs += same;
    t.check(proportional(plucker_of(a, k), plucker_of(b, k)) == same, "proportional iff equal span");
  }
  const PluckerVector bad{4, 2, {1, 0, 0, 0, 0, 1}};
  t.check(!grassmann_membership(bad), "non-member accepted");
  t.check(!satisfies_three_term_relations(bad), "non-member satisfies relations");
  return finish(t, std::to_string(equal_pairs) + " equal-span pairs");
}

Outcome homogeneous() {
  using namespace homog;
  using plucker::PluckerVector;
  Tally t;
  const int d = 3;
  std::size_t truths = 0;
  for (const FormConstants& a : {FormConstants::ones(3), FormConstants::parse("1,2,1")}) {
    const LatticeSpace sp = LatticeSpace::make(d, FieldKind::Rational, a);
    const FieldContext ctx = make_context(FieldKind::Rational, a);
    Sampler s(17);
    auto holds = [&](const HomogeneousFormula& h, const std::vector<PluckerVector>& p) {
      return eval_field_formula(h.formula, plucker::flatten(h.free, p), ctx);
    };
    for (int i = 0; i < 500; ++i) {
      const int k = s.uniform(0, d);
      const auto h = build_eta(d, k, k);
      const auto r0 = fixtures::random_point(s, d, k);
      const auto r1 = i % 3 == 0 ? plucker::scaled(r0, Scalar(3)) : fixtures::random_point(s, d, k);
      const bool o = plucker::theta_point(r0) == plucker::theta_point(r1);
      truths += o;
      t.check(holds(h, {r0, r1}) == o && certify_homogeneous(h), "eta");
    }
    for (int i = 0; i < 500; ++i) {
      const int d1 = s.uniform(0, d), d2 = s.uniform(0, d);
      const int d0 = s.uniform(std::max(d1, d2), std::min(d, d1 + d2));
      const auto h = build_sigma(d, d0, d1, d2);
      const auto r1 = fixtures::random_point(s, d, d1), r2 = fixtures::random_point(s, d, d2);
      const Subspace u = join(plucker::theta_point(r1), plucker::theta_point(r2));
      const PluckerVector r0 = u.dim() == d0 && i % 2 == 0 ? plucker::plucker_of(u.basis(), d0)
                                                           : fixtures::random_point(s, d, d0);
      const bool o = plucker::theta_point(r0) == u;
      truths += o;
      t.check(holds(h, {r0, r1, r2}) == o && certify_homogeneous(h), "sigma");
    }
    for (int i = 0; i < 500; ++i) {
      const int d1 = s.uniform(0, d), d0 = d - d1;
      const auto h = build_kappa(d, d0, d1, a, FieldKind::Rational);
      const auto r1 = fixtures::random_point(s, d, d1);
      const Subspace p = perp(FieldKind::Rational, plucker::theta_point(r1), a);
      PluckerVector r0 = i % 2 == 0 ? plucker::plucker_of(p.basis(), d0) : fixtures::random_point(s, d, d0);
      if (d0 == 0) r0 = plucker::plucker_of(Matrix(d, 0), 0);
      const bool o = plucker::theta_point(r0) == p;
      truths += o;
      t.check(holds(h, {r0, r1}) == o && certify_homogeneous(h), "kappa");
    }

    struct Case {
      const char* text;
      std::vector<int> dims;
      Quant mode;
    };
    const std::vector<Case> cases = {
        {"x1 = x2", {1, 1}, Quant::Exists},
        {"x3 = x1 + x2 && x1 != x2", {1, 1, 2}, Quant::Exists},
        {"x3 = x1' && x1 != 0", {1, 2, 2}, Quant::Exists},
        {"x3 = x1'", {2, 0, 1}, Quant::Exists},
        {"x3 = x1 + x2'", {1, 2, 2}, Quant::Exists},
        {"x3 = x1' + x2'", {2, 2, 2}, Quant::Exists},
        {"x2 = x1 + 0", {3, 3}, Quant::Exists},
        {"x3 = (x1 + x2)'", {1, 1, 1}, Quant::Exists},
        {"x1 = 0'", {3}, Quant::Exists},
        {"x1 = x2 + x3 && x2 != x3", {2, 1, 1}, Quant::Exists},
        {"x2 = x1 && x1 != 0'", {2, 2}, Quant::Exists},
        {"x3 = x1 + x2 || x1 = x2", {1, 1, 2}, Quant::Forall},
        {"x2 = x1' || x1 != 0", {0, 3}, Quant::Forall},
    };
    for (const auto& c : cases) {
      const ParsedFormula phi = parse_lattice_formula(c.text);
      HomogOptions opt;
      opt.mode = c.mode;
      std::vector<int> dims = c.dims;
      dims.resize(static_cast<std::size_t>(phi.num_vars()), 1);
      const auto tr = homog_translate(phi, dims, a, opt);
      t.check(certify_homogeneous(tr.result), std::string("certify ") + c.text);
      const auto eqs = equations(phi.formula);
      for (int i = 0; i < 300; ++i) {
        std::vector<PluckerVector> pts;
        std::vector<Subspace> u;
        for (int k : dims) {
          pts.push_back(fixtures::random_point(s, d, k));
          u.push_back(plucker::theta_point(pts.back()));
        }
        // Make the first equation hold half of the time when its lhs is a variable.
        const auto& [lhs, rhs] = eqs.front();
        if (i % 2 == 0 && lhs.op() == LOp::Var) {
          const Subspace v = eval_term(rhs, u, sp);
          const int x = lhs.index();
          if (v.dim() == dims[x]) {
            pts[x] = v.dim() == 0 ? plucker::plucker_of(Matrix(d, 0), 0) : plucker::plucker_of(v.basis(), v.dim());
            u[x] = v;
          }
        }
        const bool lat = eval_formula(phi.formula, u, sp);
        truths += lat;
        const bool got = eval_homog(tr, pts);
        t.check(got == lat, std::string("homog ") + c.text);
        std::vector<PluckerVector> rescaled;
        for (const auto& p : pts) rescaled.push_back(plucker::scaled(p, s.nonzero_scalar()));
        t.check(eval_homog(tr, rescaled) == got, std::string("scalar invariance ") + c.text);
      }
    }
  }
  return finish(t, std::to_string(truths) + " true instances");
}

Matrix rational_perp_basis(Sampler& s, int d) {
  Matrix v = identity(d);
  for (int rep = 0; rep < 3; ++rep) {
    const int i = s.uniform(0, d - 1), j = s.uniform(0, d - 1);
    if (i == j) continue;
    const int m = s.uniform(1, 4), n = s.uniform(1, 4);
    const Scalar c(Rational(m * m - n * n, m * m + n * n)), sn(Rational(2 * m * n, m * m + n * n));
    Matrix r = identity(d);
    r(i, i) = c;
    r(j, j) = c;
    r(j, i) = sn;
    r(i, j) = -sn;
    v = r * v;
  }
  const Scalar k = s.nonzero_scalar();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) v(i, j) *= k;
  }
  return v;
}

Outcome frames_suite() {
  using namespace frames;
  Tally t;
  const int d = 3;
  const FormConstants alpha = FormConstants::ones(3);
  const LatticeSpace sp = LatticeSpace::make(d, FieldKind::Rational, alpha);
  const FieldContext ctx = make_context(FieldKind::Rational, alpha);
  struct Case {
    const char* text;
    int n;
    std::function<void(Sampler&, std::vector<Scalar>&)> solve;
  };
  const std::vector<Case> cases = {
      {"x1*x2 - 1 = 0 && x3 != 0", 3,
       [](Sampler& s, std::vector<Scalar>& v) {
         v[0] = s.nonzero_scalar();
         v[1] = Scalar(1) / v[0];
       }},
      {"x1 + x2 = 0", 2, [](Sampler&, std::vector<Scalar>& v) { v[1] = -v[0]; }},
      {"x1*x1 - 2*x2 = 0 && x1 != 0", 2,
       [](Sampler& s, std::vector<Scalar>& v) {
         v[0] = s.nonzero_scalar();
         v[1] = v[0] * v[0] / Scalar(2);
       }},
      {"x1 - x2*x3 + 1 = 0", 3, [](Sampler&, std::vector<Scalar>& v) { v[0] = v[1] * v[2] - Scalar(1); }},
      {"x1 != 0 && x2 != 0 && x1 + x2 - 1 = 0", 2,
       [](Sampler& s, std::vector<Scalar>& v) {
         v[0] = s.rational_scalar();
         v[1] = Scalar(1) - v[0];
       }},
  };
  std::size_t truths = 0, negatives = 0;
  Sampler s(23, FieldKind::Rational, 4);
  for (const auto& c : cases) {
    const Formula phi = parse_field_formula(c.text, FieldKind::Rational);
    const FrameEncoding enc = encode_field_formula(phi, c.n, d, alpha);
    for (int i = 0; i < 200; ++i) {
      std::vector<Scalar> vals;
      for (int k = 0; k < c.n; ++k) vals.push_back(s.uniform(0, 4) == 0 ? Scalar(0) : s.rational_scalar());
      if (i % 2 == 0) c.solve(s, vals);
      const Matrix v = rational_perp_basis(s, d);
      const Frame good = frame_from_basis(v, alpha, FieldKind::Rational);
      std::vector<Subspace> pts;
      for (const auto& x : vals) pts.push_back(ring_encode(x, good));
      const bool want = eval_field_formula(phi, vals, ctx);
      truths += want;
      t.check(eval_encoding(enc, good, pts) == want, std::string("encoder ") + c.text);
      if (i % 4 == 1 && want) {
        // Perturbations: the encoding must reject all of them.
        Matrix w = v;
        w(0, 1) += Scalar(1);
        const Frame skew = frame_of_basis(w, alpha, FieldKind::Rational);
        Frame moved = good;
        moved.a[0][2] = moved.a[2][0] = s.subspace_of_dim(d, 1);
        Matrix n = v;
        for (int r = 0; r < d; ++r) n(r, 1) *= Scalar(2);
        const Frame stretched = frame_of_basis(n, alpha, FieldKind::Rational);
        std::vector<Subspace> off = pts;
        off[0] = s.subspace_of_dim(d, 2);
        for (const Frame* f : std::vector<const Frame*>{&skew, &moved, &stretched}) {
          const bool oracle = is_alpha_frame(*f);
          t.check(eval_encoding(enc, *f, pts) == (oracle && [&] {
                    for (const auto& p : pts) {
                      if (!in_ring(p, *f)) return false;
                    }
                    std::vector<Scalar> dv;
                    for (const auto& p : pts) dv.push_back(ring_decode(p, *f));
                    return eval_field_formula(phi, dv, ctx);
                  }()),
                  std::string("perturbed frame ") + c.text);
          negatives += !oracle;
        }
        t.check(!eval_encoding(enc, good, off), std::string("point outside the ring ") + c.text);
        ++negatives;
      }
    }
  }
  for (FieldKind kind : {FieldKind::Rational, FieldKind::Gaussian}) {
    const LatticeSpace ks = LatticeSpace::make(d, kind, alpha);
    Sampler g(29, kind, 4);
    for (int i = 0; i < 200; ++i) {
      const Frame f = frame_from_basis(i % 2 == 0 ? identity(d) : rational_perp_basis(g, d), alpha, kind);
      const RingOps ops = ring_term_ops(f);
      const Scalar r = g.rational_scalar(), q = g.rational_scalar();
      const auto asg = frame_assignment(f, {ring_encode(r, f), ring_encode(q, f)});
      auto value = [&](const LatticeTerm& term) { return ring_decode(eval_term(term, asg, ks), f); };
      t.check(value(ops.add) == r + q, "ring add");
      t.check(value(ops.mult) == r * q, "ring mult");
      t.check(value(ops.negate) == -r, "ring negate");
      t.check(value(ops.star) == involution(kind, r), "ring star");
    }
  }
  (void)sp;
  return finish(t, std::to_string(truths) + " true encodings, " + std::to_string(negatives) + " negative frames/points");
}

Outcome plain_mode() {
  Tally t;
  {
    const int d = 4;
    const FormConstants alpha = FormConstants::ones(d);
    Sampler s(31);
    for (int i = 0; i < 500; ++i) {
      const Matrix a = s.random_rank_matrix(d, d), b = s.random_rank_matrix(d, d);
      const Subspace z = Subspace::span(zassenhaus_meet(a, b));
      const Subspace viaperp = perp(FieldKind::Rational,
                                    join(perp(FieldKind::Rational, Subspace::span(a), alpha),
                                         perp(FieldKind::Rational, Subspace::span(b), alpha)),
                                    alpha);
      t.check(z == viaperp && z == meet(Subspace::span(a), Subspace::span(b)), "zassenhaus vs complement meet");
    }
  }
  std::size_t materialized = 0;
  for (int d : {2, 3}) {
    const FormConstants alpha = FormConstants::ones(d);
    gauss::Options opt;
    opt.d = d;
    opt.mode = LatticeMode::Plain;
    const LatticeSpace space = LatticeSpace::make(d, FieldKind::Rational, alpha);
    const FieldContext ctx = make_context(FieldKind::Rational, alpha);
    Sampler s(50 + d);
    for (const auto& pf : fixtures::formula_suite(300 + d, 20, LatticeMode::Plain)) {
      for (const auto& [l, r] : equations(pf.formula)) t.check(!uses_perp(l) && !uses_perp(r), "plain formula uses perp");
      std::optional<Formula> full;
      try {
        full = gauss::translate_formula(pf.formula, alpha, opt);
        ++materialized;
      } catch (const CapacityError&) {
      }
      for (int i = 0; i < 100; ++i) {
        const auto mats = structured_tuple(s, d, 3, alpha);
        const bool lat = eval_formula(pf.formula, theta_span(mats), space);
        t.check(gauss::eval_translated(pf.formula, mats, alpha, opt) == lat, "plain trace " + to_text(pf.formula));
        if (full) {
          t.check(eval_field_formula(*full, gauss::flatten_assignment(mats), ctx) == lat,
                  "plain materialized " + to_text(pf.formula));
        }
      }
    }
  }
  bool rejected = false;
  try {
    parse_lattice_formula("x1' = x2", LatticeMode::Plain);
  } catch (const ParseError&) {
    rejected = true;
  }
  t.check(rejected, "orthocomplement accepted in plain mode");
  std::ostringstream out, err;
  t.check(cli::run({"verify", "--mode", "plain", "-d", "3", "-n", "100", "x1 & x2 = x3"}, out, err) == 0,
          "cli plain verify");
  return finish(t, std::to_string(materialized) + " plain formulas fully materialized");
}

Outcome determinism() {
  Tally t;
  const std::vector<std::vector<std::string>> runs = {
      {"translate", "-d", "2", "--alpha", "1,1", "x1 & x1' = 0"},
      {"translate", "-d", "2", "--alpha", "1,2", "--field", "gauss", "x1 + x2 = x1'"},
      {"verify", "-d", "3", "--alpha", "1,1,1", "-n", "60", "--seed", "9", "x1 + x2 = x3'"},
      {"verify", "-d", "3", "-n", "40", "--seed", "9", "--inject-fault", "x1 + x2 = x3'"},
      {"verify", "--homog", "--dims", "1,1,2", "-d", "3", "-n", "40", "--seed", "4", "x3 = x1 + x2"},
      {"plucker", "[[1,0],[2,1],[0,3]]", "--roundtrip"},
      {"plucker", "--check", "-d", "4", "{\"1,2\":\"1\",\"3,4\":\"1\"}"},
      {"homog", "-d", "3", "--dims", "1,2", "x2 = x1'"},
      {"frame-encode", "-d", "3", "--check", "-n", "10", "--seed", "5", "x1*x2 - 1 = 0 && x3 != 0"},
      {"eval", "-d", "3", "--seed", "12", "x1 + x2 = x3"},
      {"eval", "-d", "2", "--field", "gauss", "--seed", "12", "--pretty", "x1' = x2"},
  };
  for (const auto& args : runs) {
    std::ostringstream o1, e1, o2, e2;
    const int c1 = cli::run(args, o1, e1);
    const int c2 = cli::run(args, o2, e2);
    std::string name;
    for (const auto& a : args) name += a + " ";
    t.check(c1 == c2 && o1.str() == o2.str() && e1.str() == e2.str() && !o1.str().empty(), name);
  }
  return finish(t, std::to_string(runs.size()) + " commands run twice");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"lattice/field translation equivalence", equivalence},
      {"case-tree exhaustiveness and soundness", case_trees},
      {"normal forms, division-free engine, orthocomplement", normal_forms},
      {"Pluecker roundtrip and membership", plucker_suite},
      {"homogeneous translation", homogeneous},
      {"frame encoding and ring operations", frames_suite},
      {"involution-free mode", plain_mode},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " [" << (o.pass ? "PASS" : "FAIL") << "] " << criteria[i].first << ": "
              << o.detail << " (" << static_cast<int>(secs) << "s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
