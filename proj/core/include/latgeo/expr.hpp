#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latgeo/matrix.hpp"
#include "latgeo/scalar.hpp"

namespace latgeo::poly {

enum class Kind : std::uint8_t { Const, Var, CSym, Sum, Prod };

class Node;

/// Hash-consed *-polynomial term over Z[c_1..c_d].  Structurally equal terms
/// share one node, so equality is pointer equality.  Construction applies a
/// light normalization (flattening, merging like terms and like factors,
/// constant folding) but never distributes products over sums.
class Expr {
 public:
  Expr();
  Expr(long value);            // NOLINT(google-explicit-constructor)
  Expr(const BigInt& value);   // NOLINT(google-explicit-constructor)

  static Expr var(int id, bool star = false);
  /// Form-constant symbol c_{j+1}.
  static Expr csym(int j);

  const Node& node() const noexcept { return *n_; }
  const Node* get() const noexcept { return n_.get(); }
  Kind kind() const noexcept;
  std::uint64_t id() const noexcept;
  std::size_t hash() const noexcept;

  bool is_const() const noexcept { return kind() == Kind::Const; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  const BigInt& const_value() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  friend bool operator==(const Expr& a, const Expr& b) noexcept { return a.n_ == b.n_; }
  friend bool operator!=(const Expr& a, const Expr& b) noexcept { return a.n_ != b.n_; }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  friend struct Builder;
  std::shared_ptr<const Node> n_;
};

class Node {
 public:
  Kind kind = Kind::Const;
  std::size_t hash = 0;
  std::uint64_t id = 0;
  BigInt value;      ///< Const value; constant term of a Sum
  int index = 0;     ///< Var id or CSym index
  bool star = false; ///< Var only
  std::vector<std::pair<Expr, BigInt>> terms;      ///< Sum: coefficient * term
  std::vector<std::pair<Expr, unsigned>> factors;  ///< Prod: factor ^ exponent
};

Expr scale(const BigInt& k, const Expr& e);
Expr pow(const Expr& e, unsigned n);

/// Splits e = k * core with k an integer and core carrying coefficient 1.
std::pair<BigInt, Expr> split_coefficient(const Expr& e);

/// Number of live interned nodes (diagnostics).
std::size_t live_nodes();

/// Memoized involution on terms (identity in rational mode).
class StarMap {
 public:
  explicit StarMap(FieldKind kind) : kind_(kind) {}
  Expr operator()(const Expr& e);
  FieldKind kind() const noexcept { return kind_; }

 private:
  FieldKind kind_;
  std::unordered_map<std::uint64_t, Expr> memo_;
};

/// Memoized exact evaluation.  Variables are looked up by id; c_j by index.
class Evaluator {
 public:
  Evaluator(FieldKind kind, const std::vector<Scalar>* vars, const std::vector<Scalar>* csyms)
      : kind_(kind), vars_(vars), csyms_(csyms) {}
  Scalar operator()(const Expr& e);
  void clear() { memo_.clear(); }

 private:
  FieldKind kind_;
  const std::vector<Scalar>* vars_;
  const std::vector<Scalar>* csyms_;
  std::unordered_map<std::uint64_t, Scalar> memo_;
};

/// Replaces variables by terms (stars are pushed through with `star`).
class Substitution {
 public:
  Substitution(FieldKind kind, std::function<Expr(int)> map)
      : star_(kind), map_(std::move(map)) {}
  Expr operator()(const Expr& e);

 private:
  StarMap star_;
  std::function<Expr(int)> map_;
  std::unordered_map<std::uint64_t, Expr> memo_;
};

/// Upper bound on total degree (variables and constant symbols), and on the
/// degree in the c_j alone.
class DegreeMap {
 public:
  int total(const Expr& e);
  int in_constants(const Expr& e);

 private:
  std::unordered_map<std::uint64_t, int> total_;
  std::unordered_map<std::uint64_t, int> cdeg_;
};

/// Number of distinct nodes reachable from the roots.
std::size_t dag_size(const std::vector<Expr>& roots);

/// Variable ids reachable from e (sorted, unique).
std::vector<int> variables(const std::vector<Expr>& roots);

/// Infix rendering in the field-formula grammar.  Shared subterms are printed
/// repeatedly, so this is meant for small terms.
std::string to_text(const Expr& e);

// ---------------------------------------------------------------------------
// Expanded polynomials

/// Variable key of a monomial factor: x_id, x_id^*, or c_j.
struct Atom {
  enum Type : std::uint8_t { X = 0, C = 1 } type = X;
  int index = 0;
  bool star = false;
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.type != b.type) return a.type > b.type;  // constants first
    if (a.index != b.index) return a.index < b.index;
    return a.star < b.star;
  }
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.type == b.type && a.index == b.index && a.star == b.star;
  }
};

using Monomial = std::vector<std::pair<Atom, unsigned>>;

/// Canonical expanded *-polynomial: sorted monomials, no zero coefficients.
class StarPolynomial {
 public:
  StarPolynomial() = default;
  static StarPolynomial constant(const BigInt& c);
  static StarPolynomial atom(const Atom& a);

  const std::map<Monomial, BigInt>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  friend StarPolynomial operator+(const StarPolynomial& a, const StarPolynomial& b);
  friend StarPolynomial operator-(const StarPolynomial& a, const StarPolynomial& b);
  friend StarPolynomial operator*(const StarPolynomial& a, const StarPolynomial& b);
  StarPolynomial scaled(const BigInt& k) const;
  friend bool operator==(const StarPolynomial& a, const StarPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  /// Maximal total degree (-1 for the zero polynomial).
  int degree() const;
  /// Replaces every starred variable by its unstarred twin.
  StarPolynomial star_stripped() const;
  bool has_star() const;
  bool has_constants() const;
  Expr to_expr() const;
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const BigInt& c);
  std::map<Monomial, BigInt> terms_;
};

/// Full expansion (exponential in the worst case; used on small terms).
/// In rational mode starred variables are identified with unstarred ones.
StarPolynomial expand(const Expr& e, FieldKind kind);

}  // namespace latgeo::poly

template <>
struct std::hash<latgeo::poly::Expr> {
  std::size_t operator()(const latgeo::poly::Expr& e) const noexcept { return e.hash(); }
};
