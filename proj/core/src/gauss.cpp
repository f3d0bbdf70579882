#include "latgeo/gauss.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "latgeo/detail/elimination.hpp"
#include "latgeo/errors.hpp"

namespace latgeo::gauss {

using poly::Kind;

SymMatrix matrix_variable(int block, int d, int m) {
  if (m < 0) m = d;
  SymMatrix x(d, m, Expr(0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < m; ++j) x(i, j) = Expr::var(block * d * d + i * m + j);
  }
  return x;
}

int scalar_var(int block, int d, int i, int j) { return block * d * d + i * d + j; }

std::vector<int> block_vars(int block, int d) {
  std::vector<int> v;
  for (int i = 0; i < d * d; ++i) v.push_back(block * d * d + i);
  return v;
}

std::vector<Scalar> flatten_assignment(const std::vector<Matrix>& mats) {
  if (mats.empty()) return {};
  const int d = mats.front().rows();
  std::vector<Scalar> env;
  env.reserve(mats.size() * static_cast<std::size_t>(d * d));
  for (const auto& a : mats) {
    if (a.rows() != d || a.cols() != d) throw UsageError("matrix variables must all be d x d");
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) env.push_back(a(i, j));
    }
  }
  return env;
}

Matrix evaluate(const SymMatrix& p, poly::Evaluator& ev) {
  Matrix m(p.rows(), p.cols());
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.cols(); ++j) m(i, j) = ev(p(i, j));
  }
  return m;
}

Formula guard_formula(const Guard& g) {
  std::vector<Formula> parts;
  for (const auto& l : g) parts.push_back(l.zero ? Formula::eq0(l.p) : Formula::neq0(l.p));
  return Formula::conj(std::move(parts));
}

bool guard_holds(const Guard& g, poly::Evaluator& ev) {
  for (const auto& l : g) {
    if (ev(l.p).is_zero() != l.zero) return false;
  }
  return true;
}

std::size_t capacity_from_env(std::size_t fallback) {
  const char* v = std::getenv("LATGEO_CAP");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw UsageError("LATGEO_CAP must be a positive integer");
  return static_cast<std::size_t>(n);
}

// ---------------------------------------------------------------------------

std::optional<bool> GuardContext::known_zero(const Expr& e) {
  if (e.is_const()) return e.is_zero();
  const Expr core = poly::split_coefficient(e).second;
  const poly::Node& n = core.node();
  if (n.kind == Kind::CSym) return false;
  if (zero_.count(core.id())) return true;
  if (nonzero_.count(core.id())) return false;
  if (n.kind == Kind::Prod) {
    bool all_nonzero = true;
    for (const auto& [f, k] : n.factors) {
      const auto z = known_zero(f);
      if (z && *z) return true;
      if (!z) all_nonzero = false;
    }
    if (all_nonzero) return false;
  }
  return std::nullopt;
}

void GuardContext::insert(const Expr& core, bool zero) {
  if (!(zero ? zero_ : nonzero_).insert(core.id()).second) return;
  if (!zero && core.kind() == Kind::Prod) {
    for (const auto& [f, k] : core.node().factors) record(f, false);
  }
}

void GuardContext::record(const Expr& e, bool zero) {
  if (e.is_const()) return;
  insert(poly::split_coefficient(e).second, zero);
  if (kind_ == FieldKind::Gaussian) insert(poly::split_coefficient(star_(e)).second, zero);
}

bool Decider::nonzero(const Expr& e) {
  if (e.is_const()) return !e.is_zero();
  if (const auto z = ctx_.known_zero(e)) return !*z;
  const bool v = choose(e);
  ctx_.record(e, !v);
  guard_.push_back({e, !v});
  return v;
}

namespace {

/// Replays a decision prefix and extends it with "nonzero" choices.
class ReplayDecider : public Decider {
 public:
  ReplayDecider(FieldKind kind, std::vector<bool>& path) : Decider(kind), path_(path) {}

 protected:
  bool choose(const Expr&) override {
    if (pos_ == path_.size()) path_.push_back(true);
    return path_[pos_++];
  }

 private:
  std::vector<bool>& path_;
  std::size_t pos_ = 0;
};

class PointDecider : public Decider {
 public:
  PointDecider(FieldKind kind, poly::Evaluator& ev) : Decider(kind), ev_(ev) {}

 protected:
  bool choose(const Expr& e) override { return !ev_(e).is_zero(); }

 private:
  poly::Evaluator& ev_;
};

class NoDecisions : public Decider {
 public:
  using Decider::Decider;

 protected:
  bool choose(const Expr&) override { throw UsageError("unexpected case distinction"); }
};

/// Depth-first enumeration of all paths of the decision tree explored by
/// `run`; the nonzero alternative is visited first.
template <class Run>
std::size_t enumerate_paths(const Options& opt, Run&& run, const std::string& what) {
  std::vector<bool> path;
  std::size_t count = 0;
  while (true) {
    if (++count > opt.max_branches) {
      throw CapacityError("case enumeration for " + what + " exceeds " + std::to_string(opt.max_branches) +
                          " branches (d=" + std::to_string(opt.d) + ")");
    }
    ReplayDecider dec(opt.kind, path);
    run(static_cast<Decider&>(dec));
    while (!path.empty() && !path.back()) path.pop_back();
    if (path.empty()) return count;
    path.back() = false;
  }
}

void check_full(const LatticeTerm& t, const Options& opt) {
  if (opt.d > opt.max_full_dim || surface_depth(t) > opt.max_full_depth) {
    throw CapacityError("full enumeration supports d <= " + std::to_string(opt.max_full_dim) +
                        " and term depth <= " + std::to_string(opt.max_full_depth) + "; got d=" +
                        std::to_string(opt.d) + " and depth " + std::to_string(surface_depth(t)) + " for " + to_text(t) +
                        " (use trace mode)");
  }
}

void check_mode(const LatticeTerm& t, const Options& opt) {
  if (opt.mode == LatticeMode::Plain && uses_perp(t)) {
    throw UsageError("orthocomplement used in plain mode: " + to_text(t));
  }
}

SymMatrix trimmed(const TermValue& v) { return resize_columns(v.P, static_cast<int>(v.f.size())); }

}  // namespace

// ---------------------------------------------------------------------------

struct TermMachine::Ops {
  TermMachine& m;
  Expr zero() const { return Expr(0); }
  Expr one() const { return Expr(1); }
  Expr mul(const Expr& a, const Expr& b) const { return a * b; }
  Expr sub(const Expr& a, const Expr& b) const { return a - b; }
  bool nonzero(const Expr& e) const { return m.dec_.nonzero(e); }
  Expr alpha(int i) const { return i == 0 ? Expr(1) : Expr::csym(i); }
  Expr star(const Expr& e) const { return m.star_(e); }
};

TermMachine::TermMachine(const Options& opt, Decider& dec) : opt_(opt), dec_(dec), star_(opt.kind) {}

SymMatrix TermMachine::eliminate(const SymMatrix& a, PivotMap* f, Expr* r) {
  Ops ops{*this};
  auto e = detail::eliminate(a, ops);
  if (f) *f = e.f;
  if (r) *r = e.r;
  return std::move(e.W);
}

SymMatrix TermMachine::ortho(const SymMatrix& a, const PivotMap& f) {
  Ops ops{*this};
  return detail::ortho_matrix(a, f, ops);
}

TermValue TermMachine::eval(const LatticeTerm& t) {
  auto it = memo_.find(t.id());
  if (it != memo_.end()) return it->second;
  const int d = opt_.d;
  TermValue v;
  Ops ops{*this};
  switch (t.op()) {
    case LOp::Var:
      v.P = eliminate(matrix_variable(t.index(), d), &v.f, &v.r);
      break;
    case LOp::Zero:
      v.P = SymMatrix(d, d, Expr(0));
      v.r = Expr(1);
      break;
    case LOp::One:
      v.P = SymMatrix(d, d, Expr(0));
      for (int i = 0; i < d; ++i) {
        v.P(i, i) = Expr(1);
        v.f.push_back(i);
      }
      v.r = Expr(1);
      break;
    case LOp::Join: {
      const TermValue a = eval(t.lhs());
      const TermValue b = eval(t.rhs());
      v.P = eliminate(hstack(trimmed(a), trimmed(b)), &v.f, &v.r);
      break;
    }
    case LOp::Perp: {
      if (opt_.mode == LatticeMode::Plain) throw UsageError("orthocomplement used in plain mode");
      const TermValue a = eval(t.lhs());
      v.P = eliminate(detail::ortho_matrix(a.P, a.f, ops), &v.f, &v.r);
      break;
    }
    case LOp::Meet: {
      const TermValue a = eval(t.lhs());
      const TermValue b = eval(t.rhs());
      auto mt = detail::zassenhaus(trimmed(a), trimmed(b), ops);
      v.P = std::move(mt.B);
      v.f = std::move(mt.f);
      v.r = std::move(mt.r);
      break;
    }
  }
  memo_.emplace(t.id(), v);
  return v;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return out;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

Expr MinorCache::minor(const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size()) throw UsageError("minor: selection length mismatch");
  if (rows.empty()) return Expr(1);
  if (rows.size() == 1) return x_(rows[0], cols[0]);
  auto key = std::make_pair(rows, cols);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const std::vector<int> rest(rows.begin() + 1, rows.end());
  Expr acc(0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const Expr& a = x_(rows[0], cols[j]);
    if (a.is_zero()) continue;
    std::vector<int> sub = cols;
    sub.erase(sub.begin() + static_cast<long>(j));
    const Expr term = a * minor(rest, sub);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  memo_.emplace(std::move(key), acc);
  return acc;
}

Expr determinant(const SymMatrix& x) {
  if (x.rows() != x.cols()) throw UsageError("determinant of non-square matrix");
  MinorCache c(x);
  std::vector<int> idx(static_cast<std::size_t>(x.rows()));
  for (int i = 0; i < x.rows(); ++i) idx[i] = i;
  return c.minor(idx, idx);
}

Formula rank_formula(const SymMatrix& x, int k) {
  const int d = x.rows();
  const int m = x.cols();
  if (k < 0 || k > std::min(d, m)) throw UsageError("rank_formula: rank " + std::to_string(k) + " out of range");
  if (k == 0) {
    std::vector<Formula> parts;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < m; ++j) parts.push_back(Formula::eq0(x(i, j)));
    }
    return Formula::conj(std::move(parts));
  }
  MinorCache c(x);
  std::vector<Formula> parts;
  if (k < std::min(d, m)) {
    for (const auto& r : combinations(d, k + 1)) {
      for (const auto& s : combinations(m, k + 1)) parts.push_back(Formula::eq0(c.minor(r, s)));
    }
  }
  std::vector<Formula> some;
  for (const auto& r : combinations(d, k)) {
    for (const auto& s : combinations(m, k)) some.push_back(Formula::neq0(c.minor(r, s)));
  }
  parts.push_back(Formula::disj(std::move(some)));
  return Formula::conj(std::move(parts));
}

Formula wnf_formula(const SymMatrix& x, const PivotMap& f) {
  const int d = x.rows();
  const int k = static_cast<int>(f.size());
  if (k > x.cols()) return Formula::bottom();
  for (int j = 0; j < k; ++j) {
    if (f[j] < 0 || f[j] >= d || (j > 0 && f[j] <= f[j - 1])) return Formula::bottom();
  }
  std::vector<Formula> parts;
  const Expr r = k > 0 ? x(f[0], 0) : Expr(1);
  if (k > 0) parts.push_back(Formula::neq0(r));
  for (int j = 0; j < x.cols(); ++j) {
    for (int i = 0; i < d; ++i) {
      if (j >= k) {
        parts.push_back(Formula::eq0(x(i, j)));
      } else if (i == f[j]) {
        if (j > 0) parts.push_back(Formula::eq0(x(i, j) - r));
      } else if (i < f[j] || std::find(f.begin(), f.end(), i) != f.end()) {
        parts.push_back(Formula::eq0(x(i, j)));
      }
    }
  }
  return Formula::conj(std::move(parts));
}

Formula wnf_recognizer(int d, int m, const PivotMap& f) { return wnf_formula(matrix_variable(0, d, m), f); }

std::map<PivotMap, CaseTable> elimination_cases(int m, const Options& opt) {
  if (m < 0 || m > 2 * opt.d) throw UsageError("elimination_cases: column count must be at most 2d");
  if (opt.d > opt.max_full_dim) {
    throw CapacityError("full enumeration supports d <= " + std::to_string(opt.max_full_dim) +
                        "; got d=" + std::to_string(opt.d) + ", m=" + std::to_string(m));
  }
  const SymMatrix x = matrix_variable(0, opt.d, m);
  std::map<PivotMap, CaseTable> out;
  enumerate_paths(
      opt,
      [&](Decider& dec) {
        TermMachine tm(opt, dec);
        CaseBranch b;
        b.P = tm.eliminate(x, &b.f, &b.r);
        b.guard = dec.guard();
        out[b.f].branches.push_back(std::move(b));
      },
      "elimination d=" + std::to_string(opt.d) + ", m=" + std::to_string(m));
  return out;
}

SymMatrix ortho_terms(const PivotMap& f, const Options& opt) {
  NoDecisions dec(opt.kind);
  TermMachine tm(opt, dec);
  return tm.ortho(matrix_variable(0, opt.d), f);
}

CaseTable term_cases(const LatticeTerm& t, const Options& opt) {
  check_mode(t, opt);
  check_full(t, opt);
  CaseTable table;
  enumerate_paths(
      opt,
      [&](Decider& dec) {
        TermMachine tm(opt, dec);
        TermValue v = tm.eval(t);
        table.branches.push_back({dec.guard(), std::move(v.f), std::move(v.P), std::move(v.r)});
      },
      to_text(t));
  return table;
}

TraceResult trace_term(const LatticeTerm& t, const std::vector<Matrix>& mats, const FormConstants& alpha,
                       const Options& opt) {
  check_mode(t, opt);
  if (alpha.dim() != opt.d) throw UsageError("form constants length does not match dimension");
  const std::vector<Scalar> env = flatten_assignment(mats);
  for (int v : variables(t)) {
    if (v >= static_cast<int>(mats.size())) throw UsageError("trace_term: no matrix for x" + std::to_string(v + 1));
  }
  if (!mats.empty() && mats.front().rows() != opt.d) throw UsageError("trace_term: matrix dimension mismatch");
  poly::Evaluator ev(opt.kind, &env, &alpha.values());
  PointDecider dec(opt.kind, ev);
  TermMachine tm(opt, dec);
  TermValue v = tm.eval(t);
  TraceResult out{{dec.guard(), std::move(v.f), std::move(v.P), std::move(v.r)}, Matrix()};
  out.value = evaluate(out.branch.P, ev);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Formula equation_body(const TermValue& a, const TermValue& b) {
  if (a.f != b.f) return Formula::bottom();
  std::vector<Formula> parts;
  const int k = static_cast<int>(a.f.size());
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < a.P.rows(); ++i) parts.push_back(Formula::eq0(b.r * a.P(i, j) - a.r * b.P(i, j)));
  }
  return Formula::conj(std::move(parts));
}

void check_options(const FormConstants& alpha, const Options& opt) {
  if (opt.d < 1) throw UsageError("dimension must be positive");
  if (alpha.dim() != opt.d) throw UsageError("form constants length does not match dimension");
}

std::vector<VarBlock> matrix_blocks(const std::vector<int>& vars, int d, std::vector<int>& scalars) {
  std::vector<VarBlock> blocks;
  for (int v : vars) {
    VarBlock b{"X" + std::to_string(v + 1), -1, block_vars(v, d)};
    scalars.insert(scalars.end(), b.vars.begin(), b.vars.end());
    blocks.push_back(std::move(b));
  }
  return blocks;
}

Formula translate_rec(const LatticeFormula& phi, const Options& opt, Stats* stats,
                      std::map<std::pair<std::uint64_t, std::uint64_t>, Formula>& memo) {
  const LFNode& n = phi.node();
  switch (n.kind) {
    case LFKind::True:
      return Formula::top();
    case LFKind::False:
      return Formula::bottom();
    case LFKind::Eq: {
      const auto key = std::make_pair(n.lhs.id(), n.rhs.id());
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      Formula g = translate_equation(n.lhs, n.rhs, opt, stats);
      memo.emplace(key, g);
      return g;
    }
    case LFKind::Not:
      return Formula::negate(translate_rec(n.kids[0], opt, stats, memo));
    case LFKind::And:
    case LFKind::Or: {
      std::vector<Formula> parts;
      for (const auto& k : n.kids) parts.push_back(translate_rec(k, opt, stats, memo));
      return n.kind == LFKind::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case LFKind::Exists:
    case LFKind::Forall: {
      std::vector<int> scalars;
      auto blocks = matrix_blocks(n.bound, opt.d, scalars);
      Formula body = translate_rec(n.kids[0], opt, stats, memo);
      return n.kind == LFKind::Exists ? Formula::exists(scalars, body, blocks)
                                      : Formula::forall(scalars, body, blocks);
    }
  }
  return Formula::top();
}

void finish_stats(const Formula& f, Stats* stats) {
  if (!stats) return;
  const FormulaStats s = latgeo::stats(f);
  stats->atoms = s.atoms;
  stats->dag_nodes = s.dag_nodes;
  stats->max_degree = s.max_degree;
}

}  // namespace

Formula translate_equation(const LatticeTerm& t1, const LatticeTerm& t2, const Options& opt, Stats* stats) {
  check_mode(t1, opt);
  check_mode(t2, opt);
  check_full(t1, opt);
  check_full(t2, opt);
  std::vector<Formula> clauses;
  const std::size_t n = enumerate_paths(
      opt,
      [&](Decider& dec) {
        TermMachine tm(opt, dec);
        const TermValue a = tm.eval(t1);
        const TermValue b = tm.eval(t2);
        std::vector<Formula> clause;
        for (const auto& l : dec.guard()) clause.push_back(l.zero ? Formula::neq0(l.p) : Formula::eq0(l.p));
        clause.push_back(equation_body(a, b));
        clauses.push_back(Formula::disj(std::move(clause)));
      },
      to_text(t1) + " = " + to_text(t2));
  if (stats) {
    stats->branches += n;
    stats->equations += 1;
  }
  return Formula::conj(std::move(clauses));
}

Formula translate_formula(const LatticeFormula& phi, const FormConstants& alpha, const Options& opt, Stats* stats) {
  check_options(alpha, opt);
  std::map<std::pair<std::uint64_t, std::uint64_t>, Formula> memo;
  Formula out = clear_constants(translate_rec(phi, opt, stats, memo), alpha);
  finish_stats(out, stats);
  return out;
}

Formula dimension_guard(int block, int h, const Options& opt) {
  if (h < 0 || h > opt.d) throw UsageError("dimension " + std::to_string(h) + " out of range");
  return rank_formula(matrix_variable(block, opt.d), h);
}

Formula translate_with_dims(const LatticeFormula& phi, const std::vector<int>& dims, const FormConstants& alpha,
                            const Options& opt, Stats* stats) {
  std::vector<Formula> parts{translate_formula(phi, alpha, opt, stats)};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] >= 0) parts.push_back(dimension_guard(static_cast<int>(k), dims[k], opt));
  }
  Formula out = Formula::conj(std::move(parts));
  finish_stats(out, stats);
  return out;
}

Formula universal_transfer(const LatticeFormula& phi, const FormConstants& alpha, const Options& opt,
                           Stats* stats) {
  if (phi.kind() != LFKind::Forall || !phi.node().kids[0].quantifier_free()) {
    throw UsageError("universal_transfer expects a universal sentence A x . psi with psi quantifier-free");
  }
  const LatticeFormula& psi = phi.node().kids[0];
  std::vector<int> vars = variables(psi);
  for (int v : phi.node().bound) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  std::vector<int> scalars;
  auto blocks = matrix_blocks(vars, opt.d, scalars);
  const Formula neg = translate_formula(LatticeFormula::negate(psi), alpha, opt, stats);
  // tau(not psi) => 0 = 1, i.e. not tau(not psi).
  Formula out = Formula::forall(scalars, Formula::negate(neg), blocks);
  finish_stats(out, stats);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool eval_translated_rec(const LatticeFormula& phi, poly::Evaluator& ev, const Options& opt) {
  const LFNode& n = phi.node();
  switch (n.kind) {
    case LFKind::True:
      return true;
    case LFKind::False:
      return false;
    case LFKind::Eq: {
      PointDecider dec(opt.kind, ev);
      TermMachine tm(opt, dec);
      const TermValue a = tm.eval(n.lhs);
      const TermValue b = tm.eval(n.rhs);
      return eval_field_formula(equation_body(a, b), ev);
    }
    case LFKind::Not:
      return !eval_translated_rec(n.kids[0], ev, opt);
    case LFKind::And:
      for (const auto& k : n.kids) {
        if (!eval_translated_rec(k, ev, opt)) return false;
      }
      return true;
    case LFKind::Or:
      for (const auto& k : n.kids) {
        if (eval_translated_rec(k, ev, opt)) return true;
      }
      return false;
    default:
      throw UsageError("eval_translated: quantified formulas are not supported");
  }
}

}  // namespace

bool eval_translated(const LatticeFormula& phi, const std::vector<Matrix>& mats, const FormConstants& alpha,
                     const Options& opt) {
  check_options(alpha, opt);
  for (const auto& [a, b] : equations(phi)) {
    check_mode(a, opt);
    check_mode(b, opt);
  }
  for (int v : variables(phi)) {
    if (v >= static_cast<int>(mats.size())) throw UsageError("eval_translated: no matrix for x" + std::to_string(v + 1));
  }
  const std::vector<Scalar> env = flatten_assignment(mats);
  poly::Evaluator ev(opt.kind, &env, &alpha.values());
  return eval_translated_rec(phi, ev, opt);
}

bool eval_translated_with_dims(const LatticeFormula& phi, const std::vector<int>& dims,
                               const std::vector<Matrix>& mats, const FormConstants& alpha, const Options& opt) {
  if (!eval_translated(phi, mats, alpha, opt)) return false;
  const std::vector<Scalar> env = flatten_assignment(mats);
  poly::Evaluator ev(opt.kind, &env, &alpha.values());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] < 0) continue;
    if (!eval_field_formula(dimension_guard(static_cast<int>(k), dims[k], opt), ev)) return false;
  }
  return true;
}

}  // namespace latgeo::gauss
