#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

#include "latgeo/expr.hpp"
#include "latgeo/fieldlang.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/matrix.hpp"

namespace latgeo::gauss {

using SymMatrix = BasicMatrix<Expr>;

/// d x m matrix of the scalar variables of lattice variable `block`; entry
/// (i, j) is variable block*d*d + i*d + j.
SymMatrix matrix_variable(int block, int d, int m = -1);
int scalar_var(int block, int d, int i, int j);
std::vector<int> block_vars(int block, int d);
/// Scalar assignment for matrix tuples (A_k at block k).
std::vector<Scalar> flatten_assignment(const std::vector<Matrix>& mats);
Matrix evaluate(const SymMatrix& p, poly::Evaluator& ev);

/// p = 0 (zero) or p != 0.
struct Literal {
  Expr p;
  bool zero = false;
};
using Guard = std::vector<Literal>;
Formula guard_formula(const Guard& g);
bool guard_holds(const Guard& g, poly::Evaluator& ev);

struct CaseBranch {
  Guard guard;
  PivotMap f;
  SymMatrix P;  ///< d x d, in f-wNF whenever the guard holds
  Expr r;       ///< common pivot value (1 for f empty)
};

struct CaseTable {
  std::vector<CaseBranch> branches;
};

struct Options {
  int d = 2;
  FieldKind kind = FieldKind::Rational;
  LatticeMode mode = LatticeMode::Involutive;
  std::size_t max_branches = 4096;
  int max_full_dim = 3;    ///< full enumeration only up to this d
  int max_full_depth = 3;  ///< ... and this term depth
};

/// Branch cap from LATGEO_CAP if set, else `fallback`.
std::size_t capacity_from_env(std::size_t fallback);

/// Literal memory of one path through a case tree.  A literal is decided
/// from memory when it follows from recorded ones: equal cores up to an
/// integer factor, form constants (never zero), products via their factors,
/// and the involution in Gaussian mode.
class GuardContext {
 public:
  explicit GuardContext(FieldKind kind) : star_(kind), kind_(kind) {}
  std::optional<bool> known_zero(const Expr& e);
  void record(const Expr& e, bool zero);

 private:
  void insert(const Expr& core, bool zero);
  poly::StarMap star_;
  FieldKind kind_;
  std::unordered_set<std::uint64_t> zero_;
  std::unordered_set<std::uint64_t> nonzero_;
};

/// Decision source for symbolic elimination.
class Decider {
 public:
  explicit Decider(FieldKind kind) : ctx_(kind) {}
  virtual ~Decider() = default;
  /// true iff e is taken to be nonzero; records undetermined decisions.
  bool nonzero(const Expr& e);
  const Guard& guard() const noexcept { return guard_; }

 protected:
  virtual bool choose(const Expr& e) = 0;

 private:
  GuardContext ctx_;
  Guard guard_;
};

struct TermValue {
  PivotMap f;
  SymMatrix P;
  Expr r;
};

/// Symbolic evaluation of lattice terms by composing case tables:
/// variables and sums by division-free elimination, orthocomplements by the
/// complement term matrix followed by re-elimination, meets (plain mode) by
/// Zassenhaus.  Subterms are memoized within one path.
class TermMachine {
 public:
  TermMachine(const Options& opt, Decider& dec);
  TermValue eval(const LatticeTerm& t);
  SymMatrix eliminate(const SymMatrix& a, PivotMap* f, Expr* r);
  SymMatrix ortho(const SymMatrix& a, const PivotMap& f);

 private:
  struct Ops;
  const Options& opt_;
  Decider& dec_;
  poly::StarMap star_;
  std::map<std::uint64_t, TermValue> memo_;
};

// ---------------------------------------------------------------------------

/// rho^k(X): all (k+1)-minors vanish and some k-minor does not.
Formula rank_formula(const SymMatrix& x, int k);
/// nu^{f}(X): X (any shape d x m) is in f-wNF.
Formula wnf_formula(const SymMatrix& x, const PivotMap& f);
Formula wnf_recognizer(int d, int m, const PivotMap& f);

/// Case tables of the division-free elimination of a generic d x m matrix,
/// grouped by resulting pivot map.
std::map<PivotMap, CaseTable> elimination_cases(int m, const Options& opt);
/// Complement term matrix Q^f (uses c_1..c_d; scaled by c_1...c_d).
SymMatrix ortho_terms(const PivotMap& f, const Options& opt);
CaseTable term_cases(const LatticeTerm& t, const Options& opt);

struct TraceResult {
  CaseBranch branch;
  Matrix value;  ///< branch.P evaluated at the input
};
TraceResult trace_term(const LatticeTerm& t, const std::vector<Matrix>& mats, const FormConstants& alpha,
                       const Options& opt);

struct Stats {
  std::size_t branches = 0;
  std::size_t equations = 0;
  std::size_t atoms = 0;
  std::size_t dag_nodes = 0;
  int max_degree = 0;
};

/// gamma_{t1 t2}: conjunction over the joint case tree of
/// guard => (pivot maps equal and r2 P1 = r1 P2).
Formula translate_equation(const LatticeTerm& t1, const LatticeTerm& t2, const Options& opt,
                           Stats* stats = nullptr);
/// Equations replaced by translate_equation, quantifier blocks mapped to
/// matrix-variable blocks, constants cleared.
Formula translate_formula(const LatticeFormula& phi, const FormConstants& alpha, const Options& opt,
                          Stats* stats = nullptr);
/// delta_h(X_block) = rank_formula(X_block, h).
Formula dimension_guard(int block, int h, const Options& opt);
/// dims[k] < 0 leaves block k unconstrained.
Formula translate_with_dims(const LatticeFormula& phi, const std::vector<int>& dims, const FormConstants& alpha,
                            const Options& opt, Stats* stats = nullptr);
/// For phi = A x. psi: A X. not tau(not psi).
Formula universal_transfer(const LatticeFormula& phi, const FormConstants& alpha, const Options& opt,
                           Stats* stats = nullptr);

/// Value of translate_formula(phi) at the given matrices without
/// materializing it: each equation contributes the body of the one branch
/// of its case tree whose guard holds at the input (the branches of the
/// tree are mutually exclusive), evaluated exactly.
bool eval_translated(const LatticeFormula& phi, const std::vector<Matrix>& mats, const FormConstants& alpha,
                     const Options& opt);
bool eval_translated_with_dims(const LatticeFormula& phi, const std::vector<int>& dims,
                               const std::vector<Matrix>& mats, const FormConstants& alpha, const Options& opt);

/// Memoized symbolic minors (Laplace expansion).
class MinorCache {
 public:
  explicit MinorCache(const SymMatrix& x) : x_(x) {}
  Expr minor(const std::vector<int>& rows, const std::vector<int>& cols);

 private:
  const SymMatrix& x_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, Expr> memo_;
};

Expr determinant(const SymMatrix& x);
/// All strictly increasing index lists of length k from {0..n-1}.
std::vector<std::vector<int>> combinations(int n, int k);

}  // namespace latgeo::gauss
