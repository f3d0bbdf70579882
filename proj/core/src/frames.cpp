#include "latgeo/frames.hpp"

#include <algorithm>
#include <unordered_map>

#include "latgeo/errors.hpp"

namespace latgeo::frames {

namespace {

using Vec = std::vector<Scalar>;

/// Coordinates of w in the columns of the invertible matrix v.
std::optional<Vec> solve(const Matrix& v, const Vec& w) {
  const int d = v.rows();
  Matrix m = hstack(v, Matrix::from_columns(d, {w}));
  for (int c = 0; c < d; ++c) {
    int p = c;
    while (p < d && m(p, c).is_zero()) ++p;
    if (p == d) return std::nullopt;
    for (int j = 0; j <= d; ++j) std::swap(m(p, j), m(c, j));
    const Scalar inv = m(c, c).inverse();
    for (int j = 0; j <= d; ++j) m(c, j) *= inv;
    for (int i = 0; i < d; ++i) {
      if (i == c || m(i, c).is_zero()) continue;
      const Scalar q = m(i, c);
      for (int j = 0; j <= d; ++j) m(i, j) -= q * m(c, j);
    }
  }
  Vec out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out[i] = m(i, d);
  return out;
}

Vec diff(const Vec& a, const Vec& b) {
  Vec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Subspace line(const Vec& v) { return Subspace::span(Matrix::from_columns(static_cast<int>(v.size()), {v})); }

bool is_zero_space(const Subspace& u) { return u.dim() == 0; }

}  // namespace

Frame frame_of_basis(const Matrix& v, const FormConstants& alpha, FieldKind kind) {
  const int d = v.rows();
  if (v.cols() != d || rank(v) != d) throw UsageError("frame basis must be an invertible d x d matrix");
  if (alpha.dim() != d) throw UsageError("form constants of the wrong length");
  Frame f{d, kind, alpha, {}};
  f.a.assign(static_cast<std::size_t>(d), std::vector<Subspace>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) f.a[i][j] = i == j ? line(v.column(i)) : line(diff(v.column(j), v.column(i)));
  }
  return f;
}

Frame frame_from_basis(const Matrix& v, const FormConstants& alpha, FieldKind kind) {
  Frame f = frame_of_basis(v, alpha, kind);
  const int d = f.d;
  const Scalar mu = alpha.form(kind, v.column(0), v.column(0)) / alpha[0];
  if (mu.is_zero()) throw UsageError("frame basis: isotropic first vector");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Scalar g = alpha.form(kind, v.column(i), v.column(j));
      if (i != j && !g.is_zero()) throw UsageError("frame basis is not orthogonal for the form");
      if (i == j && g != mu * alpha[i]) throw UsageError("frame basis norms do not match the form constants");
    }
  }
  return f;
}

bool frame_axioms_hold(const Frame& f) {
  const int d = f.d;
  int total = 0;
  Subspace sum = Subspace::zero(d);
  for (int i = 0; i < d; ++i) {
    if (f.at(i, i).dim() != 1) return false;
    total += f.at(i, i).dim();
    sum = join(sum, f.at(i, i));
  }
  if (sum != Subspace::full(d) || total != d) return false;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      if (f.at(i, j) != f.at(j, i)) return false;
      const Subspace& ai = f.at(i, i);
      const Subspace& aij = f.at(i, j);
      if (join(ai, f.at(j, j)) != join(ai, aij) || !is_zero_space(meet(ai, aij))) return false;
      for (int k = 0; k < d; ++k) {
        if (k == i || k == j) continue;
        if (f.at(i, k) != meet(join(ai, f.at(k, k)), join(aij, f.at(j, k)))) return false;
      }
    }
  }
  return true;
}

std::optional<Matrix> frame_basis(const Frame& f) {
  if (!frame_axioms_hold(f)) return std::nullopt;
  const int d = f.d;
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) g.set_column(i, f.at(i, i).basis().column(0));
  Matrix v(d, d);
  v.set_column(0, g.column(0));
  for (int j = 1; j < d; ++j) {
    const auto c = solve(g, f.at(0, j).basis().column(0));
    if (!c) return std::nullopt;
    const Scalar s = (*c)[0], t = (*c)[static_cast<std::size_t>(j)];
    if (s.is_zero() || t.is_zero()) return std::nullopt;
    Vec col = g.column(j);
    const Scalar scale = -t / s;
    for (auto& e : col) e *= scale;
    v.set_column(j, col);
  }
  return v;
}

bool is_alpha_frame(const Frame& f) {
  const auto v = frame_basis(f);
  if (!v) return false;
  const int d = f.d;
  for (int i = 0; i < d; ++i) {
    const Subspace pi = perp(f.kind, f.at(i, i), f.alpha);
    if (!is_zero_space(meet(f.at(i, i), pi))) return false;
    for (int j = 0; j < d; ++j) {
      if (i != j && !f.at(i, i).leq(perp(f.kind, f.at(j, j), f.alpha))) return false;
      if (i != j && f.at(i, j) != line(diff(v->column(j), v->column(i)))) return false;
    }
  }
  const Scalar mu = f.alpha.form(f.kind, v->column(0), v->column(0)) / f.alpha[0];
  if (mu.is_zero()) return false;
  for (int i = 0; i < d; ++i) {
    if (f.alpha.form(f.kind, v->column(i), v->column(i)) != mu * f.alpha[i]) return false;
  }
  return true;
}

bool in_ring(const Subspace& u, const Frame& f) {
  return u.ambient() == f.d && join(u, f.at(1, 1)) == join(f.at(0, 0), f.at(1, 1)) &&
         is_zero_space(meet(u, f.at(1, 1)));
}

Subspace ring_encode(const Scalar& r, const Frame& f) {
  const auto v = frame_basis(f);
  if (!v) throw UsageError("ring_encode: not a frame");
  Vec w = v->column(0);
  const Vec v2 = v->column(1);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= r * v2[i];
  return line(w);
}

Scalar ring_decode(const Subspace& u, const Frame& f) {
  if (!in_ring(u, f)) throw UsageError("ring_decode: subspace is not in R_21");
  const auto v = frame_basis(f);
  if (!v) throw UsageError("ring_decode: not a frame");
  const auto c = solve(*v, u.basis().column(0));
  return -(*c)[1] / (*c)[0];
}

nlohmann::json to_json(const Frame& f) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < f.d; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < f.d; ++j) row.push_back(latgeo::to_json(f.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

int num_frame_vars(int d) { return d * (d + 1) / 2; }

int frame_var(int i, int j, int d) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= d) throw UsageError("frame variable out of range");
  return i * d - i * (i - 1) / 2 + (j - i);
}

std::vector<std::string> frame_var_names(int d) {
  std::vector<std::string> out(static_cast<std::size_t>(num_frame_vars(d)));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) out[frame_var(i, j, d)] = "z" + std::to_string(i + 1) + std::to_string(j + 1);
  }
  return out;
}

std::vector<Subspace> frame_assignment(const Frame& f, const std::vector<Subspace>& points) {
  std::vector<Subspace> out(static_cast<std::size_t>(num_frame_vars(f.d)));
  for (int i = 0; i < f.d; ++i) {
    for (int j = i; j < f.d; ++j) out[frame_var(i, j, f.d)] = f.at(i, j);
  }
  out.insert(out.end(), points.begin(), points.end());
  return out;
}

RingTerms::RingTerms(int d, const FormConstants& alpha) : d_(d), alpha_(alpha) {
  if (d < 3) throw UsageError("ring terms need d >= 3");
  if (alpha.dim() != d) throw UsageError("form constants of the wrong length");
}

LatticeTerm RingTerms::z(int i, int j) const { return LatticeTerm::var(frame_var(i, j, d_)); }

namespace {
LatticeTerm J(const LatticeTerm& a, const LatticeTerm& b) { return LatticeTerm::join(a, b); }
LatticeTerm M(const LatticeTerm& a, const LatticeTerm& b) { return LatticeTerm::meet(a, b); }
}  // namespace

LatticeTerm RingTerms::project_31(const LatticeTerm& x) const { return M(J(x, z(1, 2)), J(z(0, 0), z(1, 1))); }

// With u = (v1 - r v2) F: p = (u + a_23) & (a_1 + a_3) = (v1 - r v3) F.
LatticeTerm RingTerms::add(const LatticeTerm& x, const LatticeTerm& y) const {
  const LatticeTerm p = M(J(x, z(1, 2)), J(z(0, 0), z(2, 2)));
  const LatticeTerm q = M(J(y, z(2, 2)), J(p, z(1, 1)));  // v1 - s v2 - r v3
  return project_31(q);
}

LatticeTerm RingTerms::mult(const LatticeTerm& x, const LatticeTerm& y) const {
  const LatticeTerm p = M(J(x, z(1, 2)), J(z(0, 0), z(2, 2)));  // v1 - r v3
  const LatticeTerm m = M(J(y, z(0, 2)), J(z(1, 1), z(2, 2)));  // v3 - s v2
  return M(J(p, m), J(z(0, 0), z(1, 1)));
}

LatticeTerm RingTerms::swap(const LatticeTerm& x) const {
  const LatticeTerm a = M(J(x, z(0, 2)), J(z(1, 1), z(2, 2)));
  const LatticeTerm b = M(J(a, z(0, 1)), J(z(0, 0), z(2, 2)));
  return M(J(b, z(1, 2)), J(z(0, 0), z(1, 1)));
}

LatticeTerm RingTerms::negate(const LatticeTerm& x) const {
  // omega(-1) = (v1 + v2) F via the point (v3 - v1 - v2) F.
  const LatticeTerm n = M(J(z(0, 2), z(1, 1)), J(z(1, 2), z(0, 0)));
  const LatticeTerm minus_one = M(J(n, z(2, 2)), J(z(0, 0), z(1, 1)));
  return mult(x, minus_one);
}

LatticeTerm RingTerms::integer(const BigInt& n) const {
  if (n == 0) return z(0, 0);
  if (n < 0) return negate(integer(-n));
  if (n == 1) return z(0, 1);
  const BigInt half = n / 2;
  const LatticeTerm h = integer(half);
  LatticeTerm out = add(h, h);
  if (n % 2 != 0) out = add(out, z(0, 1));
  return out;
}

LatticeTerm RingTerms::constant(const Rational& q) const {
  if (q.get_den() == 1) return integer(q.get_num());
  return mult(integer(q.get_num()), swap(integer(q.get_den())));
}

// u^perp & (a_1 + a_2) sends omega(r) to (r* alpha_2 / alpha_1) v_1 + v_2; the
// swap and a rescaling by alpha_1 / alpha_2 then give omega(-r*).
LatticeTerm RingTerms::star(const LatticeTerm& x) const {
  LatticeTerm w = swap(M(LatticeTerm::perp(x), J(z(0, 0), z(1, 1))));
  const Rational ratio = alpha_[0].re() / alpha_[1].re();
  if (ratio != 1) w = mult(w, constant(ratio));
  return negate(w);
}

RingOps ring_term_ops(const Frame& f) {
  RingTerms rt(f.d, f.alpha);
  const int base = num_frame_vars(f.d);
  RingOps ops{LatticeTerm::var(base), LatticeTerm::var(base + 1), {}, {}, {}, {}};
  ops.add = rt.add(ops.x, ops.y);
  ops.mult = rt.mult(ops.x, ops.y);
  ops.negate = rt.negate(ops.x);
  ops.star = rt.star(ops.x);
  return ops;
}

// ---------------------------------------------------------------------------

namespace {

class Lifter {
 public:
  Lifter(const RingTerms& rt, const FormConstants& alpha, int base, int n) : rt_(rt), alpha_(alpha), base_(base), n_(n) {}

  LatticeTerm operator()(const Expr& e) {
    const poly::Node& nd = e.node();
    auto it = memo_.find(nd.id);
    if (it != memo_.end()) return it->second;
    LatticeTerm out;
    switch (nd.kind) {
      case poly::Kind::Const:
        out = rt_.constant(Rational(nd.value));
        break;
      case poly::Kind::CSym:
        out = rt_.constant(alpha_[nd.index].re());
        break;
      case poly::Kind::Var: {
        if (nd.index < 0 || nd.index >= n_) {
          throw UsageError("field variable x" + std::to_string(nd.index + 1) + " is not a point variable");
        }
        out = LatticeTerm::var(base_ + nd.index);
        if (nd.star) out = rt_.star(out);
        break;
      }
      case poly::Kind::Sum: {
        bool first = true;
        auto acc_add = [&](const LatticeTerm& t) {
          out = first ? t : rt_.add(out, t);
          first = false;
        };
        if (nd.value != 0) acc_add(rt_.constant(Rational(nd.value)));
        for (const auto& [t, c] : nd.terms) {
          const LatticeTerm lt = (*this)(t);
          if (c == 1) {
            acc_add(lt);
          } else if (c == -1) {
            acc_add(rt_.negate(lt));
          } else {
            acc_add(rt_.mult(rt_.constant(Rational(c)), lt));
          }
        }
        if (first) out = rt_.constant(Rational(0));
        break;
      }
      case poly::Kind::Prod: {
        bool first = true;
        for (const auto& [f, k] : nd.factors) {
          const LatticeTerm lt = (*this)(f);
          for (unsigned i = 0; i < k; ++i) {
            out = first ? lt : rt_.mult(out, lt);
            first = false;
          }
        }
        if (first) out = rt_.constant(Rational(1));
        break;
      }
    }
    memo_.emplace(nd.id, out);
    return out;
  }

 private:
  const RingTerms& rt_;
  const FormConstants& alpha_;
  int base_, n_;
  std::unordered_map<std::uint64_t, LatticeTerm> memo_;
};

void collect_literals(const Formula& f, std::vector<std::pair<Expr, bool>>& out) {
  switch (f.kind()) {
    case FKind::True:
      return;
    case FKind::Atom:
      out.emplace_back(f.node().poly, true);
      return;
    case FKind::Not:
      if (f.node().kids[0].kind() == FKind::Atom) {
        out.emplace_back(f.node().kids[0].node().poly, false);
        return;
      }
      break;
    case FKind::And:
      for (const auto& k : f.node().kids) {
        if (k.kind() == FKind::And || k.kind() == FKind::Or || k.kind() == FKind::True) {
          throw UsageError("frame encoding: conjunctive mode needs a conjunction of literals");
        }
        collect_literals(k, out);
      }
      return;
    default:
      break;
  }
  throw UsageError("frame encoding: conjunctive mode needs a conjunction of p = 0 and p != 0");
}

}  // namespace

FrameEncoding encode_field_formula(const Formula& phi, int num_points, int d, const FormConstants& alpha,
                                   EncodeMode mode) {
  if (mode == EncodeMode::Dnf) {
    throw NotImplementedError("frame encoding of disjunctions is not available; use a conjunction of literals");
  }
  if (!phi.quantifier_free()) throw UsageError("frame encoding needs a quantifier-free formula");
  if (phi.is_false()) throw UsageError("frame encoding: the formula is unsatisfiable (false)");
  std::vector<std::pair<Expr, bool>> lits;
  collect_literals(phi, lits);

  RingTerms rt(d, alpha);
  const int base = num_frame_vars(d);
  FrameEncoding enc;
  enc.d = d;
  enc.num_points = num_points;
  enc.names = frame_var_names(d);
  for (int k = 0; k < num_points; ++k) enc.names.push_back("x" + std::to_string(k + 1));

  auto z = [&](int i, int j) { return rt.z(i, j); };
  auto sum_of = [&](const std::vector<int>& idx) {
    LatticeTerm s = LatticeTerm::zero();
    bool first = true;
    for (int i : idx) {
      s = first ? z(i, i) : J(s, z(i, i));
      first = false;
    }
    return s;
  };
  auto others = [&](std::vector<int> skip) {
    std::vector<int> idx;
    for (int k = 0; k < d; ++k) {
      if (std::find(skip.begin(), skip.end(), k) == skip.end()) idx.push_back(k);
    }
    return sum_of(idx);
  };
  auto& c = enc.conditions;
  auto is_one = [&](const LatticeTerm& t) { c.push_back(LatticeTerm::perp(t)); };
  // x + a_i = a_i + a_j and x meet a_i = 0
  auto in_r = [&](const LatticeTerm& x, int i, int j) {
    c.push_back(M(J(J(x, z(i, i)), z(j, j)), others({i, j})));
    c.push_back(M(x, z(i, i)));
    is_one(J(x, others({j})));
  };
  auto same_in_r = [&](const LatticeTerm& a, const LatticeTerm& b, int i) { c.push_back(M(J(a, b), z(i, i))); };

  std::vector<int> all(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) all[i] = i;
  is_one(sum_of(all));
  {
    LatticeTerm inter = others({0});
    for (int i = 1; i < d; ++i) inter = M(inter, others({i}));
    c.push_back(inter);
  }
  for (int k = 1; k < d; ++k) {
    std::vector<int> head(all.begin(), all.begin() + k);
    c.push_back(M(sum_of(head), z(k, k)));
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      in_r(z(i, j), i, j);
      c.push_back(M(z(i, i), J(LatticeTerm::perp(z(i, i)), z(j, j))));
      for (int k = 0; k < d; ++k) {
        if (k == i || k == j) continue;
        const LatticeTerm w = M(J(z(i, i), z(k, k)), J(z(i, j), z(j, k)));
        in_r(w, i, k);
        same_in_r(w, z(i, k), i);
      }
    }
  }
  for (int j = 1; j < d; ++j) {
    LatticeTerm p = M(J(z(0, 0), z(j, j)), LatticeTerm::perp(z(0, j)));
    if (j >= 2) p = M(J(p, z(1, j)), J(z(0, 0), z(1, 1)));
    const LatticeTerm target = rt.constant(-alpha[0].re() / alpha[j].re());
    in_r(p, 1, 0);
    same_in_r(p, target, 1);
  }

  Lifter lift(rt, alpha, base, num_points);
  for (int k = 0; k < num_points; ++k) in_r(LatticeTerm::var(base + k), 1, 0);
  for (const auto& [p, zero] : lits) {
    const LatticeTerm hat = lift(p);
    c.push_back(zero ? M(J(hat, z(0, 0)), z(1, 1)) : M(hat, z(0, 0)));
  }

  std::vector<LatticeTerm> level = c;
  while (level.size() > 1) {
    std::vector<LatticeTerm> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(J(level[i], level[i + 1]));
    if (level.size() % 2 != 0) next.push_back(level.back());
    level = std::move(next);
  }
  enc.term = level.front();
  return enc;
}

bool eval_encoding(const FrameEncoding& enc, const Frame& f, const std::vector<Subspace>& points) {
  if (static_cast<int>(points.size()) != enc.num_points) throw UsageError("eval_encoding: wrong number of points");
  const LatticeSpace space = LatticeSpace::make(f.d, f.kind, f.alpha);
  return eval_term(enc.term, frame_assignment(f, points), space).dim() == 0;
}

ParsedFormula encoding_formula(const FrameEncoding& enc) {
  ParsedFormula pf;
  pf.formula = LatticeFormula::eq(expand_derived(enc.term), LatticeTerm::zero());
  pf.names = enc.names;
  pf.mode = LatticeMode::Involutive;
  return pf;
}

homog::HomogTranslation encode_homogeneous(const FrameEncoding& enc, const FormConstants& alpha, FieldKind kind,
                                           std::size_t max_deltas) {
  homog::HomogOptions opt;
  opt.kind = kind;
  opt.max_deltas = max_deltas;
  const ParsedFormula pf = encoding_formula(enc);
  return homog::homog_translate(pf, std::vector<int>(pf.names.size(), 1), alpha, opt);
}

}  // namespace latgeo::frames
