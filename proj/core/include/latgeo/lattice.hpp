#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgeo/matrix.hpp"
#include "latgeo/scalar.hpp"

namespace latgeo {

/// Column span in F^d, stored as its canonical reduced column echelon form.
class Subspace {
 public:
  Subspace() = default;
  static Subspace span(const Matrix& a);
  static Subspace zero(int d);
  static Subspace full(int d);

  int ambient() const noexcept { return nf_.rows(); }
  int dim() const noexcept { return static_cast<int>(f_.size()); }
  /// d x d normal form, pivot columns first.
  const Matrix& normal_form() const noexcept { return nf_; }
  const PivotMap& pivots() const noexcept { return f_; }
  /// d x dim basis (the nonzero columns of the normal form).
  Matrix basis() const;
  bool contains(const std::vector<Scalar>& v) const;
  bool leq(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.f_ == b.f_ && a.nf_ == b.nf_; }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  Matrix nf_;
  PivotMap f_;
};

Subspace join(const Subspace& a, const Subspace& b);
Subspace meet(const Subspace& a, const Subspace& b);  ///< Zassenhaus
Subspace perp(FieldKind kind, const Subspace& a, const FormConstants& alpha);
std::string to_string(const Subspace& u);

nlohmann::json to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Matrix& a);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Subspace& u);
Subspace subspace_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Terms and formulas

/// Involutive: signature + 0 '; meet and 1 are abbreviations.
/// Plain: signature + & 0 1, no orthocomplement.
enum class LatticeMode : std::uint8_t { Involutive, Plain };
std::string to_string(LatticeMode m);
LatticeMode parse_lattice_mode(std::string_view s);

enum class LOp : std::uint8_t { Var, Zero, One, Join, Meet, Perp };

struct LNode;

/// Interned lattice term; equal terms share one node.
class LatticeTerm {
 public:
  LatticeTerm();  // 0
  static LatticeTerm var(int index);
  static LatticeTerm zero();
  static LatticeTerm one();
  static LatticeTerm join(const LatticeTerm& a, const LatticeTerm& b);
  static LatticeTerm meet(const LatticeTerm& a, const LatticeTerm& b);
  static LatticeTerm perp(const LatticeTerm& a);

  const LNode& node() const noexcept { return *n_; }
  LOp op() const noexcept;
  std::uint64_t id() const noexcept;
  const LatticeTerm& lhs() const;
  const LatticeTerm& rhs() const;
  int index() const;

  friend bool operator==(const LatticeTerm& a, const LatticeTerm& b) { return a.n_ == b.n_; }
  friend bool operator!=(const LatticeTerm& a, const LatticeTerm& b) { return a.n_ != b.n_; }

 private:
  explicit LatticeTerm(std::shared_ptr<const LNode> n) : n_(std::move(n)) {}
  static LatticeTerm intern(LOp op, int index, std::vector<LatticeTerm> kids);
  std::shared_ptr<const LNode> n_;
};

struct LNode {
  LOp op;
  int index = 0;
  std::uint64_t id = 0;
  std::vector<LatticeTerm> kids;
};

/// Meet as (a' + b')', one as 0'.  Used to bring plain-syntax terms into
/// the involutive signature.
LatticeTerm expand_derived(const LatticeTerm& t);
int depth(const LatticeTerm& t);
/// Depth as written: (a' + b')' counts as one meet and 0' as the constant 1.
int surface_depth(const LatticeTerm& t);
std::vector<int> variables(const LatticeTerm& t);
bool uses_perp(const LatticeTerm& t);
std::string to_text(const LatticeTerm& t, const std::vector<std::string>* names = nullptr);

enum class LFKind : std::uint8_t { True, False, Eq, Not, And, Or, Exists, Forall };

struct LFNode;

class LatticeFormula {
 public:
  LatticeFormula();  // true
  static LatticeFormula top();
  static LatticeFormula bottom();
  static LatticeFormula eq(const LatticeTerm& a, const LatticeTerm& b);
  static LatticeFormula negate(const LatticeFormula& a);
  static LatticeFormula conj(std::vector<LatticeFormula> parts);
  static LatticeFormula disj(std::vector<LatticeFormula> parts);
  static LatticeFormula exists(std::vector<int> vars, const LatticeFormula& body);
  static LatticeFormula forall(std::vector<int> vars, const LatticeFormula& body);

  LFKind kind() const noexcept;
  const LFNode& node() const noexcept { return *n_; }
  bool quantifier_free() const;

 private:
  explicit LatticeFormula(std::shared_ptr<const LFNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const LFNode> n_;
};

struct LFNode {
  LFKind kind = LFKind::True;
  LatticeTerm lhs, rhs;                ///< Eq
  std::vector<LatticeFormula> kids;    ///< Not, And, Or, quantifiers
  std::vector<int> bound;              ///< quantifiers
};

/// A parsed formula with its variable names (index = variable id).
struct ParsedFormula {
  LatticeFormula formula;
  std::vector<std::string> names;
  LatticeMode mode = LatticeMode::Involutive;
  int num_vars() const { return static_cast<int>(names.size()); }
};

/// Grammar: variables x1..x99 (other names such as y1 are numbered after
/// the x's), 0, 1, + (join), & (meet), postfix ' (orthocomplement); = and !=;
/// &&, ||, !; E y1 y2 . phi and A y1 . phi.  Precedence: ' binds tightest,
/// then &, then +.
ParsedFormula parse_lattice_formula(std::string_view text, LatticeMode mode = LatticeMode::Involutive);
LatticeTerm parse_lattice_term(std::string_view text, LatticeMode mode = LatticeMode::Involutive);

std::string to_text(const LatticeFormula& f, const std::vector<std::string>* names = nullptr);
/// Equations of the formula in first-occurrence order.
std::vector<std::pair<LatticeTerm, LatticeTerm>> equations(const LatticeFormula& f);
std::vector<int> variables(const LatticeFormula& f);
int max_depth(const LatticeFormula& f);

// ---------------------------------------------------------------------------
// Evaluation

struct LatticeSpace {
  int d = 1;
  FieldKind kind = FieldKind::Rational;
  FormConstants alpha = FormConstants::ones(1);
  static LatticeSpace make(int d, FieldKind kind, const FormConstants& alpha);
};

Subspace eval_term(const LatticeTerm& t, const std::vector<Subspace>& u, const LatticeSpace& space);
/// Quantifier-free formulas only.
bool eval_formula(const LatticeFormula& f, const std::vector<Subspace>& u, const LatticeSpace& space);

/// Bounded search for quantified formulas: quantified variables range over
/// the spans of normal forms with integer fill entries in [-height, height].
/// A semi-decision aid for tests.
struct BoundedSearch {
  int height = 1;
};
bool eval_formula_bounded(const LatticeFormula& f, const std::vector<Subspace>& u,
                          const LatticeSpace& space, const BoundedSearch& search);
std::vector<Subspace> enumerate_bounded_subspaces(int d, int height);

std::vector<Subspace> theta_span(const std::vector<Matrix>& mats);

// ---------------------------------------------------------------------------
// Special-equation flattening

enum class SpecialKind : std::uint8_t { Zero, Join, Perp, One, Meet };

/// target = 0, target = a + b, target = a', target = 1, target = a & b.
struct SpecialEquation {
  SpecialKind kind;
  int target = 0;
  int a = -1;
  int b = -1;
};

struct SpecialSystem {
  int num_original = 0;
  std::vector<std::string> names;       ///< all variables, originals first
  std::vector<SpecialEquation> defs;    ///< in evaluation order
  LatticeFormula residual;              ///< equations between variables only
  int num_vars() const { return static_cast<int>(names.size()); }
};

/// One fresh variable per distinct compound subterm (and for 0 and 1).
SpecialSystem flatten_special(const LatticeFormula& f, int num_original,
                              std::vector<std::string> names = {});
/// Values of all variables, the originals taken from u.
std::vector<Subspace> eval_system(const SpecialSystem& sys, const std::vector<Subspace>& u,
                                  const LatticeSpace& space);
bool satisfies_defs(const SpecialSystem& sys, const std::vector<Subspace>& all, const LatticeSpace& space);
std::string to_text(const SpecialSystem& sys);

}  // namespace latgeo
